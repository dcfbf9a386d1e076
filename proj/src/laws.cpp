#include <cmath>

#include "cliffop/nemyckii.hpp"

namespace cliffop {

namespace {

double tnorm(std::span<const double> u) {
  double s = 0.0;
  for (double c : u) s += c * c;
  return std::sqrt(s);
}

ScalarOfPoint constant(double c) {
  return [c](std::span<const double>) { return c; };
}

PointwiseLaw make(std::string name, int n, LawLayout layout,
                  std::function<Multivector(const PointwiseLaw&, std::span<const double>)> tuple_map) {
  PointwiseLaw law;
  law.name = std::move(name);
  law.n = n;
  law.layout = layout;
  // the evaluator captures a copy of the layout data it needs, not the law
  law.f = [n, layout, tuple_map](std::span<const double>, std::span<const double> u) {
    PointwiseLaw shape;
    shape.n = n;
    shape.layout = layout;
    return tuple_map(shape, u);
  };
  return law;
}

}  // namespace

PointwiseLaw scaled_law(int n, double c, LawLayout layout) {
  PointwiseLaw law = make("scaled", n, layout, [c](const PointwiseLaw& s, std::span<const double> u) {
    return s.embed(u) * Complex(c);
  });
  const double ac = std::abs(c);
  law.claims.growth = GrowthClaim{constant(0.0), ac};
  law.claims.lipschitz = ac;
  if (c > 0.0) {
    law.claims.monotone = true;
    law.claims.strictly_monotone = true;
    law.claims.coercive = CoerciveClaim{c, constant(0.0)};
    law.claims.positive = true;
  }
  return law;
}

PointwiseLaw identity_law(int n, LawLayout layout) {
  PointwiseLaw law = scaled_law(n, 1.0, layout);
  law.name = "identity";
  return law;
}

PointwiseLaw negation_law(int n, LawLayout layout) {
  PointwiseLaw law = scaled_law(n, -1.0, layout);
  law.name = "negation";
  return law;
}

PointwiseLaw shift_law(int n, LawLayout layout) {
  PointwiseLaw law = make("shift", n, layout, [](const PointwiseLaw& s, std::span<const double> u) {
    std::vector<double> w(u.begin(), u.end());
    w[0] -= 1.0;
    return s.embed(w);
  });
  law.claims.growth = GrowthClaim{constant(1.0), 1.0};
  law.claims.lipschitz = 1.0;
  law.claims.monotone = true;
  law.claims.strictly_monotone = true;
  law.claims.asymptotic_radius = 2.0;
  return law;
}

PointwiseLaw square_law(int n, LawLayout layout) {
  PointwiseLaw law = make("square", n, layout, [](const PointwiseLaw& s, std::span<const double> u) {
    std::vector<double> w(u.begin(), u.end());
    for (double& c : w) c *= c;
    return s.embed(w);
  });
  // deliberately optimistic claims; the checkers are expected to refute them
  law.claims.growth = GrowthClaim{constant(0.0), 1.0};
  law.claims.lipschitz = 1.0;
  return law;
}

PointwiseLaw saturating_law(int n, LawLayout layout) {
  PointwiseLaw law = make("saturating", n, layout, [](const PointwiseLaw& s, std::span<const double> u) {
    return s.embed(u) * Complex(1.0 / (1.0 + tnorm(u)));
  });
  law.claims.growth = GrowthClaim{constant(1.0), 0.0};
  law.claims.monotone = true;
  law.claims.strictly_monotone = true;
  law.claims.positive = true;
  law.claims.lipschitz = 1.0;
  return law;
}

PointwiseLaw shifted_saturating_law(int n, LawLayout layout) {
  PointwiseLaw law =
      make("identity_plus_saturating", n, layout, [](const PointwiseLaw& s, std::span<const double> u) {
        return s.embed(u) * Complex(1.0 + 1.0 / (1.0 + tnorm(u)));
      });
  law.claims.growth = GrowthClaim{constant(0.0), 2.0};
  law.claims.monotone = true;
  law.claims.strictly_monotone = true;
  law.claims.coercive = CoerciveClaim{1.0, constant(0.0)};
  law.claims.positive = true;
  law.claims.lipschitz = 2.0;
  return law;
}

PointwiseLaw constant_law(int n, std::function<Multivector(std::span<const double>)> a,
                          LawLayout layout) {
  PointwiseLaw law;
  law.name = "constant";
  law.n = n;
  law.layout = layout;
  law.f = [a](std::span<const double> x, std::span<const double>) { return a(x); };
  law.claims.monotone = true;
  law.claims.lipschitz = 0.0;
  return law;
}

PointwiseLaw bounded_sine_law(int n, LawLayout layout) {
  PointwiseLaw law = make("bounded_sine", n, layout, [](const PointwiseLaw& s, std::span<const double> u) {
    const double r = tnorm(u);
    const double scale = r > 0.0 ? std::sin(r) / r : 1.0;
    return s.embed(u) * Complex(scale);
  });
  law.claims.growth = GrowthClaim{constant(1.0), 0.0};
  law.claims.lipschitz = 1.0;
  return law;
}

}  // namespace cliffop
