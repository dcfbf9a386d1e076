#include "cliffop/magneto.hpp"

#include <cmath>
#include <numbers>

#include "lattice.hpp"
#include "operators_internal.hpp"

namespace cliffop {

namespace {

constexpr double kPi = std::numbers::pi;

double tnorm(std::span<const double> u) {
  double s = 0.0;
  for (double c : u) s += c * c;
  return std::sqrt(s);
}

ScalarOfPoint zero_fn() {
  return [](std::span<const double>) { return 0.0; };
}

void require_demag_context(const OperatorContext& ctx) {
  if (ctx.params().n != 3) throw std::invalid_argument("magneto needs a three-dimensional domain");
  if (ctx.params().a0() != 0.0 || ctx.params().has_vector_part()) {
    throw std::invalid_argument("magneto needs the undisturbed operator (a = 0)");
  }
}

void require_real_vector(const Field& M) {
  if (off_subspace_fraction(M, vector_blades(M.dim()), true) > 0.0) {
    throw std::invalid_argument("magnetization must be a real vector field");
  }
}

// Unnormalised potential sum_y <x - y, M(y)> / |x - y|^3 h^3 at lattice
// points within one cell of G, then its centred gradient at the voxels.
Field grad_div_unnormalised(const Field& M, const OperatorContext& ctx) {
  const auto& c = ctx.cache();
  const detail::Lattice& l1 = *c.lattices[1];
  const detail::Lattice& l0 = *c.lattices[0];
  const auto& dist = l1.distance_to_mask();
  const GridDomain& dom = ctx.domain();
  std::vector<std::array<double, 3>> y(M.voxel_count());
  for (std::size_t v = 0; v < M.voxel_count(); ++v) {
    const auto yc = dom.voxel_center(v);
    y[v] = {yc[0], yc[1], yc[2]};
  }
  std::vector<double> phi(l1.size(), 0.0);
  std::vector<double> x(3);
  for (std::size_t p = 0; p < l1.size(); ++p) {
    if (dist[p] > 1) continue;
    l1.center(p, x);
    const long self = l1.voxel_at(p);
    double acc = 0.0;
    for (std::size_t v = 0; v < M.voxel_count(); ++v) {
      if (static_cast<long>(v) == self) continue;  // odd kernel: the self cell contributes 0
      const double d0 = x[0] - y[v][0], d1 = x[1] - y[v][1], d2 = x[2] - y[v][2];
      const double r2 = d0 * d0 + d1 * d1 + d2 * d2;
      const auto m = M.values(v);
      acc += (d0 * m[1].real() + d1 * m[2].real() + d2 * m[4].real()) / (r2 * std::sqrt(r2));
    }
    phi[p] = acc * c.vol;
  }
  Field out(ctx.domain_ptr());
  for (std::size_t v = 0; v < M.voxel_count(); ++v) {
    const auto idx = l0.index_of(l0.point_of_voxel(v));
    for (int k = 0; k < 3; ++k) {
      auto ip = idx, im = idx;
      ip[k] += 1;
      im[k] -= 1;
      out.values(v)[Blade{1} << k] = (phi[l1.point_of(ip)] - phi[l1.point_of(im)]) / (2.0 * c.h[k]);
    }
  }
  return out;
}

}  // namespace

void MHCurveSpec::validate() const {
  if (family == Family::Linear) {
    if (!(chi > 0.0)) throw std::invalid_argument("linear M-H curve needs chi > 0");
  } else {
    if (!(chi0 > 0.0) || !(ms > 0.0) || !(beta > 0.0)) {
      throw std::invalid_argument("saturating M-H curve needs chi0, Ms, beta > 0");
    }
  }
}

PointwiseLaw mh_law(const MHCurveSpec& spec) {
  spec.validate();
  PointwiseLaw law;
  law.n = 3;
  law.layout = LawLayout::Vector;
  if (spec.family == MHCurveSpec::Family::Linear) {
    const double k = 1.0 / spec.chi;
    law.name = "mh_linear";
    law.f = [k](std::span<const double>, std::span<const double> m) {
      Multivector out(3);
      for (int j = 0; j < 3; ++j) out[Blade{1} << j] = k * m[j];
      return out;
    };
    law.claims.growth = GrowthClaim{zero_fn(), k};
    law.claims.coercive = CoerciveClaim{k, zero_fn()};
    law.claims.lipschitz = k;
  } else {
    const double k = 1.0 / spec.chi0, ms = spec.ms, beta = spec.beta;
    law.name = "mh_saturating";
    law.f = [k, ms, beta](std::span<const double>, std::span<const double> m) {
      const double r = tnorm(m);
      const double s = k + beta * r / (ms + r);
      Multivector out(3);
      for (int j = 0; j < 3; ++j) out[Blade{1} << j] = s * m[j];
      return out;
    };
    law.claims.growth = GrowthClaim{zero_fn(), k + beta};
    law.claims.coercive = CoerciveClaim{k, zero_fn()};
    law.claims.lipschitz = k + 2.0 * beta;
  }
  law.claims.monotone = true;
  law.claims.strictly_monotone = true;
  law.claims.positive = true;
  return law;
}

Field demag_field(const Field& M, const OperatorContext& ctx) {
  require_demag_context(ctx);
  require_real_vector(M);
  return singular_B_apply(M, ctx);
}

DemagPaths demag_apply(const Field& M, const OperatorContext& ctx) {
  require_demag_context(ctx);
  require_real_vector(M);
  DemagPaths out{singular_B_apply(M, ctx), grad_div_unnormalised(M, ctx), 0.0};
  out.potential_gradient *= Complex(1.0 / (4.0 * kPi));
  const double ref = l2_norm(out.composition);
  out.relative_difference = ref > 0.0 ? l2_norm(out.composition - out.potential_gradient) / ref : 0.0;
  return out;
}

RepresentationCheck representation_cross_check(const Field& M, const OperatorContext& ctx) {
  require_demag_context(ctx);
  require_real_vector(M);
  const Field bm = singular_B_apply(M, ctx);
  const Field g = grad_div_unnormalised(M, ctx);
  RepresentationCheck rc;
  const double gg = l2_inner(g, g);
  rc.fitted_prefactor = gg > 0.0 ? l2_inner(bm, g) / gg : 0.0;
  rc.expected_prefactor = 1.0 / (4.0 * kPi);
  rc.alternative_prefactor = 1.0 / (8.0 * std::pow(kPi, 1.5));
  const double ref = l2_norm(bm);
  rc.residual_after_fit = ref > 0.0 ? l2_norm(bm - g * Complex(rc.fitted_prefactor)) / ref : 0.0;
  return rc;
}

nlohmann::json to_json(const InequalityReport& r) {
  return {{"hi_dot_m", r.hi_dot_m}, {"m_norm_sq", r.m_norm_sq}, {"ineq2_pass", r.ineq2_pass},
          {"ineq3_pass", r.ineq3_pass}, {"eps", r.eps},         {"delta", r.delta}};
}

InequalityReport verify_inequalities(const Field& M, const OperatorContext& ctx, double delta,
                                     std::optional<double> eps) {
  const Field hi = demag_field(M, ctx) * Complex(-1.0);
  InequalityReport r;
  r.hi_dot_m = l2_inner(hi, M);
  r.m_norm_sq = l2_inner(M, M);
  r.eps = eps ? *eps : 1e-6 * r.m_norm_sq;
  r.delta = delta;
  r.ineq2_pass = r.hi_dot_m <= r.eps;
  r.ineq3_pass = std::abs(r.hi_dot_m) <= (1.0 + delta) * r.m_norm_sq + r.eps;
  return r;
}

double uniform_ball_demag_factor(const OperatorContext& ctx) {
  const Field M = constant_vector_field(ctx.domain_ptr(), {0.0, 0.0, 1.0});
  const Field bm = demag_field(M, ctx);
  const auto interior = interior_voxels(ctx.domain(), 2);
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t v = 0; v < bm.voxel_count(); ++v) {
    if (!interior[v]) continue;
    sum += bm.values(v)[4].real();
    ++count;
  }
  if (count == 0) throw std::invalid_argument("uniform_ball_demag_factor: no interior voxels");
  return sum / static_cast<double>(count);
}

MagnetoOutcome solve_magnetization(const MagnetoProblem& p) {
  const PointwiseLaw law = mh_law(p.curve);
  MagnetoOutcome out(p.domain);
  SamplingOptions opt = p.checks;
  if (opt.box.empty()) opt.box = p.domain->box();
  out.monotone = check_monotone(law, false, opt);
  if (out.monotone.verdict != Verdict::NoCounterexample) {
    throw PropertyCheckFailed("M-H law failed the monotonicity check", out.monotone);
  }
  out.lipschitz = check_lipschitz(law, opt);
  if (out.lipschitz.verdict != Verdict::NoCounterexample) {
    throw PropertyCheckFailed("M-H law failed the Lipschitz check", out.lipschitz);
  }
  const double c_hat = out.monotone.estimates.at("modulus_c_hat");
  if (!(c_hat > 0.0)) {
    throw PropertyCheckFailed("M-H law shows no positive monotonicity modulus", out.monotone);
  }
  SolveConfig cfg = p.solver;
  cfg.c = c_hat;
  cfg.L = std::max(out.lipschitz.estimates.at("lipschitz_hat"), c_hat);
  const OperatorContext ctx(p.domain, KernelParams::laplace(3), 2, p.quadrature);
  out.solve = solve_monotone(law, ctx, p.applied, cfg);
  out.inequalities = verify_inequalities(out.solve.solution, ctx);
  return out;
}

Field constant_vector_field(DomainPtr domain, const std::vector<double>& value) {
  const int n = domain->dim();
  if (static_cast<int>(value.size()) != n) throw DimensionMismatch("constant field dimension");
  return Field::from_function(std::move(domain), [&](std::span<const double>) {
    Multivector m(n);
    for (int j = 0; j < n; ++j) m[Blade{1} << j] = value[j];
    return m;
  });
}

Field dipole_field(DomainPtr domain, const std::vector<double>& moment,
                   const std::vector<double>& position) {
  if (domain->dim() != 3 || moment.size() != 3 || position.size() != 3) {
    throw DimensionMismatch("dipole field is three-dimensional");
  }
  return Field::from_function(std::move(domain), [&](std::span<const double> x) {
    double r[3], rn = 0.0, mr = 0.0;
    for (int k = 0; k < 3; ++k) {
      r[k] = x[k] - position[k];
      rn += r[k] * r[k];
    }
    rn = std::sqrt(rn);
    if (rn < kSingularGuard) throw SingularEvaluation("dipole evaluated at its own position");
    for (int k = 0; k < 3; ++k) mr += moment[k] * r[k] / rn;
    Multivector m(3);
    for (int k = 0; k < 3; ++k) {
      m[Blade{1} << k] = (3.0 * mr * r[k] / rn - moment[k]) / (4.0 * kPi * rn * rn * rn);
    }
    return m;
  });
}

}  // namespace cliffop
