#include "cliffop/nemyckii.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace cliffop {

Multivector PointwiseLaw::embed(std::span<const double> u) const {
  Multivector m(n);
  if (layout == LawLayout::Vector) {
    for (int j = 0; j < n; ++j) m[Blade{1} << j] = u[j];
  } else {
    m[0] = u[0];
    for (int j = 0; j < n; ++j) m[Blade{1} << j] = u[j + 1];
  }
  return m;
}

std::string to_string(Verdict v) {
  return v == Verdict::NoCounterexample ? "no-counterexample" : "counterexample";
}

namespace {

double tuple_norm(std::span<const double> u) {
  double s = 0.0;
  for (double c : u) s += c * c;
  return std::sqrt(s);
}

std::string point_string(std::span<const double> x) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  return os.str();
}

Multivector evaluate(const PointwiseLaw& law, std::span<const double> x, std::span<const double> u) {
  Multivector out = law.f(x, u);
  if (out.dim() != law.n) throw DimensionMismatch("law " + law.name + " returned the wrong dimension");
  return out;
}

std::vector<Blade> layout_blades(const PointwiseLaw& law) {
  return law.layout == LawLayout::Vector ? vector_blades(law.n) : paravector_blades(law.n);
}

}  // namespace

std::vector<double> law_tuple(const PointwiseLaw& law, const Field& u, std::size_t v) {
  const auto vals = u.values(v);
  const auto blades = layout_blades(law);
  std::vector<double> t;
  t.reserve(blades.size());
  double scale = 0.0, off = 0.0;
  std::vector<std::uint8_t> used(vals.size(), 0);
  for (Blade b : blades) {
    t.push_back(vals[b].real());
    scale += std::norm(vals[b]);
    off += vals[b].imag() * vals[b].imag();
    used[b] = 1;
  }
  for (std::size_t b = 0; b < vals.size(); ++b) {
    if (!used[b]) off += std::norm(vals[b]);
  }
  if (off > 1e-24 * (1.0 + scale)) {
    throw std::invalid_argument("nemyckii_apply: field value at " +
                                point_string(u.domain().voxel_center(v)) +
                                " is not a real tuple in the law's layout");
  }
  return t;
}

Field nemyckii_apply(const PointwiseLaw& law, const Field& u) {
  if (u.dim() != law.n) throw DimensionMismatch("nemyckii_apply: law and field dimensions differ");
  Field out(u.domain_ptr());
  for (std::size_t v = 0; v < u.voxel_count(); ++v) {
    const auto t = law_tuple(law, u, v);
    const auto x = u.domain().voxel_center(v);
    Multivector fx(law.n);
    try {
      fx = evaluate(law, x, t);
    } catch (const std::exception& e) {
      throw LawEvaluationError("law " + law.name + " failed at " + point_string(x) + ": " + e.what(), x);
    }
    for (const Complex& c : fx.coeffs()) {
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
        throw LawEvaluationError("law " + law.name + " returned a non-finite value at " + point_string(x), x);
      }
    }
    out.set(v, fx);
  }
  return out;
}

std::pair<double, double> pairing_two_ways(const PointwiseLaw& law, const Field& u) {
  const Field fu = nemyckii_apply(law, u);
  const double direct = l2_inner(fu, u);
  double pointwise = 0.0;
  for (std::size_t v = 0; v < u.voxel_count(); ++v) {
    pointwise += scalar_product(fu.at(v), u.at(v));
  }
  return {direct, pointwise * u.domain().voxel_volume()};
}

nlohmann::json to_json(const PropertyReport& r) {
  nlohmann::json j;
  j["property"] = r.property;
  j["verdict"] = to_string(r.verdict);
  j["samples"] = r.samples;
  j["estimates"] = r.estimates;
  j["parameters"] = r.parameters;
  if (r.counterexample) {
    j["counterexample"] = {{"x", r.counterexample->x},
                           {"u", r.counterexample->u},
                           {"v", r.counterexample->v},
                           {"violation", r.counterexample->violation}};
  } else {
    j["counterexample"] = nullptr;
  }
  if (r.field_check) {
    j["field_check"] = {{"pass", r.field_check->pass},
                        {"lhs", r.field_check->lhs},
                        {"rhs", r.field_check->rhs},
                        {"relation", r.field_check->relation}};
  }
  return j;
}

// --- sampling --------------------------------------------------------------

namespace {

struct Sampler {
  Sampler(const PointwiseLaw& law, const SamplingOptions& opt) : law(law), opt(opt), rng(opt.seed) {
    box = opt.box.empty() ? std::vector<Interval>(law.n, Interval{-1.0, 1.0}) : opt.box;
    if (static_cast<int>(box.size()) != law.n) throw DimensionMismatch("sampling box dimension");
  }

  std::vector<double> point() {
    std::vector<double> x(law.n);
    for (int k = 0; k < law.n; ++k) {
      x[k] = std::uniform_real_distribution<double>(box[k].low, box[k].high)(rng);
    }
    return x;
  }

  double component() {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (unit(rng) < opt.tail_fraction) {
      const double c = opt.r0 * std::tan(std::numbers::pi * (unit(rng) - 0.5));
      return std::clamp(c, -1e6 * opt.r0, 1e6 * opt.r0);
    }
    return std::uniform_real_distribution<double>(-opt.r0, opt.r0)(rng);
  }

  std::vector<double> tuple() {
    std::vector<double> u(law.arity());
    for (double& c : u) c = component();
    // some draws shrunk toward the origin, where the uniform part is too sparse
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (unit(rng) < 0.2) {
      const double shrink = std::pow(10.0, -4.0 * unit(rng)) / opt.r0;
      for (double& c : u) c *= shrink;
    }
    return u;
  }

  // Second argument: an independent draw or a small perturbation of u.
  std::vector<double> partner(const std::vector<double>& u) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (unit(rng) < 0.5) return tuple();
    const double scale = std::pow(10.0, -6.0 * unit(rng)) * std::max(1.0, tuple_norm(u));
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> v = u;
    for (double& c : v) c += scale * g(rng);
    return v;
  }

  const PointwiseLaw& law;
  const SamplingOptions& opt;
  std::mt19937_64 rng;
  std::vector<Interval> box;
};

struct Evaluation {
  double violation;                  // > 0 means the inequality fails
  std::optional<double> ratio;       // property-specific estimate
};

double pair(const Multivector& a, const Multivector& b) { return scalar_product(a, b); }

// The pointwise inequality behind each property, written as a violation.
Evaluation evaluate_property(const PointwiseLaw& law, const std::string& property,
                             const std::map<std::string, double>& params,
                             std::span<const double> x, std::span<const double> u,
                             std::span<const double> v) {
  const Multivector fu = evaluate(law, x, u);
  const Multivector eu = law.embed(u);
  const double un = tuple_norm(u);
  if (property == "growth") {
    const double rhs = law.claims.growth->a(x) + params.at("b") * un;
    const double lhs = norm(fu);
    return {lhs - rhs - 1e-12 * (1.0 + rhs), lhs / std::max(rhs, 1e-300)};
  }
  if (property == "coercive") {
    const double d = params.at("d");
    const double g = law.claims.coercive->g(x);
    const double lhs = pair(fu, eu);
    const double rhs = d * un * un + g;
    return {rhs - lhs - 1e-12 * (norm(fu) * un + std::abs(rhs)), std::nullopt};
  }
  if (property == "positive" || property == "asymptotically_positive") {
    if (property == "asymptotically_positive" && un < params.at("R")) return {-1.0, std::nullopt};
    const double val = pair(fu, eu);
    return {-val - 1e-12 * norm(fu) * un, val};
  }
  // two-point properties
  const Multivector fv = evaluate(law, x, v);
  const Multivector ev = law.embed(v);
  const Multivector df = fu - fv;
  const Multivector du = eu - ev;
  const double dun = norm(du);
  // rounding in the differences: nearby huge draws cancel
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double df_err = 4.0 * eps * (norm(fu) + norm(fv));
  const double du_err = 4.0 * eps * (norm(eu) + norm(ev));
  if (property == "monotone" || property == "strictly_monotone") {
    const double val = pair(df, du);
    const double ratio = dun > 0.0 ? val / (dun * dun) : 0.0;
    const double slack = 1e-12 * norm(df) * dun + df_err * dun + du_err * norm(df);
    if (property == "monotone") return {-val - slack, ratio};
    if (dun == 0.0) return {-1.0, std::nullopt};
    return {1e-12 * dun * dun - val, ratio};
  }
  if (property == "lipschitz") {
    const double L = params.at("L");
    const double dfn = norm(df);
    return {dfn - L * dun * (1.0 + 1e-12) - df_err - L * du_err - 1e-300,
            dun > 0.0 ? std::optional<double>(dfn / dun) : std::nullopt};
  }
  throw std::invalid_argument("unknown property: " + property);
}

bool two_point(const std::string& property) {
  return property == "monotone" || property == "strictly_monotone" || property == "lipschitz";
}

PropertyReport run_sampling(const PointwiseLaw& law, const std::string& property,
                            std::map<std::string, double> params, const SamplingOptions& opt,
                            const std::function<void(Evaluation&, std::span<const double>)>& track = {}) {
  if (opt.samples < 1) throw std::invalid_argument("sampling needs at least one sample");
  PropertyReport rep;
  rep.property = property;
  rep.parameters = std::move(params);
  Sampler s(law, opt);
  const bool asymptotic = property == "asymptotically_positive";
  for (std::size_t i = 0; i < opt.samples; ++i) {
    const auto x = s.point();
    auto u = s.tuple();
    if (asymptotic) {
      // push the draw outside the ball |u| < R
      const double R = rep.parameters.at("R");
      const double un = tuple_norm(u);
      if (un < R) {
        const double target = R * (1.0 + std::uniform_real_distribution<double>(0.0, 1.0)(s.rng));
        if (un == 0.0) u[0] = target;
        else for (double& c : u) c *= target / un;
      }
    }
    std::vector<double> v;
    if (two_point(property)) v = s.partner(u);
    Evaluation e = evaluate_property(law, property, rep.parameters, x, u, v);
    ++rep.samples;
    if (track) track(e, u);
    if (e.violation > 0.0 && (!rep.counterexample || e.violation > rep.counterexample->violation)) {
      rep.verdict = Verdict::Counterexample;
      rep.counterexample = Counterexample{x, u, v, e.violation};
    }
  }
  return rep;
}

Field random_tuple_field(const PointwiseLaw& law, const DomainPtr& domain, double scale,
                         std::mt19937_64& rng) {
  const auto blades = layout_blades(law);
  Field u = random_field(domain, blades, false, rng);
  u *= scale;
  return u;
}

// a(x) or g(x) sampled on voxel centres.
Field scalar_field_of(const GridDomain& domain, const ScalarOfPoint& fn) {
  auto ptr = std::shared_ptr<const GridDomain>(&domain, [](const GridDomain*) {});
  return Field::from_function(ptr, [&](std::span<const double> x) {
    return Multivector::scalar(domain.dim(), fn(x));
  });
}

DomainPtr borrow(const GridDomain& d) {
  return std::shared_ptr<const GridDomain>(&d, [](const GridDomain*) {});
}

}  // namespace

PropertyReport check_growth(const PointwiseLaw& law, const GridDomain* domain,
                            const SamplingOptions& opt) {
  if (!law.claims.growth) throw std::invalid_argument("check_growth: law declares no growth bound");
  const auto& claim = *law.claims.growth;
  PropertyReport rep = run_sampling(law, "growth", {{"b", claim.b}}, opt);
  if (domain) {
    // ||Fu|| <= ||a|| + b ||u|| by Minkowski on the pointwise bound.
    std::mt19937_64 rng(opt.seed + 1);
    const DomainPtr d = borrow(*domain);
    const double a_norm = l2_norm(scalar_field_of(*domain, claim.a));
    FieldCheck fc{true, 0.0, 0.0, "||Fu|| <= ||a|| + b ||u||"};
    double worst = -1.0;
    for (int i = 0; i < opt.field_samples; ++i) {
      const Field u = random_tuple_field(law, d, opt.r0 / 3.0, rng);
      const double lhs = l2_norm(nemyckii_apply(law, u));
      const double rhs = a_norm + claim.b * l2_norm(u);
      if (lhs - rhs > worst) {
        worst = lhs - rhs;
        fc.lhs = lhs;
        fc.rhs = rhs;
      }
      if (lhs > rhs * (1.0 + 1e-12) + 1e-300) fc.pass = false;
    }
    rep.field_check = fc;
  }
  return rep;
}

PropertyReport check_monotone(const PointwiseLaw& law, bool strict, const SamplingOptions& opt) {
  double c_hat = std::numeric_limits<double>::infinity();
  PropertyReport rep = run_sampling(law, strict ? "strictly_monotone" : "monotone", {}, opt,
                                    [&](Evaluation& e, std::span<const double>) {
                                      if (e.ratio) c_hat = std::min(c_hat, *e.ratio);
                                    });
  rep.estimates["modulus_c_hat"] = c_hat;
  return rep;
}

PropertyReport check_coercive(const PointwiseLaw& law, const GridDomain* domain,
                              const SamplingOptions& opt) {
  if (!law.claims.coercive) throw std::invalid_argument("check_coercive: law declares no (d, g)");
  const auto& claim = *law.claims.coercive;
  PropertyReport rep = run_sampling(law, "coercive", {{"d", claim.d}}, opt);
  if (domain) {
    std::mt19937_64 rng(opt.seed + 2);
    const DomainPtr d = borrow(*domain);
    const Field gf = scalar_field_of(*domain, claim.g);
    double g_int = 0.0;
    for (std::size_t v = 0; v < gf.voxel_count(); ++v) g_int += gf.values(v)[0].real();
    g_int *= domain->voxel_volume();
    FieldCheck fc{true, 0.0, 0.0, "(Fu,u) >= d ||u||^2 + int g"};
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < opt.field_samples; ++i) {
      const Field u = random_tuple_field(law, d, opt.r0 / 3.0, rng);
      const double lhs = pairing_two_ways(law, u).first;
      const double un = l2_norm(u);
      const double rhs = claim.d * un * un + g_int;
      if (lhs - rhs < worst) {
        worst = lhs - rhs;
        fc.lhs = lhs;
        fc.rhs = rhs;
      }
      if (lhs < rhs - 1e-12 * (std::abs(lhs) + std::abs(rhs))) fc.pass = false;
    }
    rep.field_check = fc;
  }
  return rep;
}

PropertyReport check_positivity(const PointwiseLaw& law, std::optional<double> radius,
                                const GridDomain* domain, const SamplingOptions& opt) {
  PropertyReport rep;
  if (radius) {
    if (!(*radius > 0.0)) throw std::invalid_argument("check_positivity: R must be positive");
    rep = run_sampling(law, "asymptotically_positive", {{"R", *radius}}, opt);
  } else {
    rep = run_sampling(law, "positive", {}, opt);
  }
  if (!domain) return rep;

  // Integrated consequence. For the asymptotic variant the pairing can only
  // be negative where |u| < R; bound that part by sampling the inner ball.
  double inner_floor = 0.0;
  if (radius) {
    Sampler s(law, opt);
    const std::size_t inner = std::max<std::size_t>(opt.samples / 10, 1000);
    for (std::size_t i = 0; i < inner; ++i) {
      const auto x = s.point();
      auto u = s.tuple();
      const double un = tuple_norm(u);
      const double target = *radius * std::uniform_real_distribution<double>(0.0, 1.0)(s.rng);
      if (un > 0.0) for (double& c : u) c *= target / un;
      inner_floor = std::min(inner_floor, pair(evaluate(law, x, u), law.embed(u)));
    }
  }
  const double c = 1.1 * std::max(0.0, -inner_floor) * domain->measure();
  rep.estimates["field_constant_c"] = c;
  std::mt19937_64 rng(opt.seed + 3);
  const DomainPtr d = borrow(*domain);
  FieldCheck fc{true, std::numeric_limits<double>::infinity(), -c, "(Fu,u) >= -c"};
  for (int i = 0; i < opt.field_samples; ++i) {
    // mix of scales so both the inner ball and the far field are visited
    const double scale = (i % 2 == 0 ? 0.1 : 1.0) * (radius ? *radius : opt.r0 / 3.0);
    const Field u = random_tuple_field(law, d, scale, rng);
    const double lhs = pairing_two_ways(law, u).first;
    fc.lhs = std::min(fc.lhs, lhs);
    if (lhs < -c - 1e-12 * std::abs(lhs)) fc.pass = false;
  }
  rep.field_check = fc;
  return rep;
}

PropertyReport check_lipschitz(const PointwiseLaw& law, const SamplingOptions& opt) {
  if (!law.claims.lipschitz) throw std::invalid_argument("check_lipschitz: law declares no L");
  double l_hat = 0.0;
  PropertyReport rep = run_sampling(law, "lipschitz", {{"L", *law.claims.lipschitz}}, opt,
                                    [&](Evaluation& e, std::span<const double>) {
                                      if (e.ratio) l_hat = std::max(l_hat, *e.ratio);
                                    });
  rep.estimates["lipschitz_hat"] = l_hat;
  return rep;
}

std::optional<double> replay(const PointwiseLaw& law, const PropertyReport& report) {
  if (!report.counterexample) return std::nullopt;
  const auto& ce = *report.counterexample;
  return evaluate_property(law, report.property, report.parameters, ce.x, ce.u, ce.v).violation;
}

}  // namespace cliffop
