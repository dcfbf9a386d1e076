#include "cliffop/solver.hpp"

#include <cmath>
#include <random>

namespace cliffop {

namespace {

constexpr double kResidualFloor = 1e-300;

void require_paravector(const Field& f, const char* what) {
  const double off = off_subspace_fraction(f, paravector_blades(f.dim()), false);
  if (off > 1e-12) {
    throw NotAParavector(std::string(what) + " is not paravector-valued (off-subspace fraction " +
                         std::to_string(off) + ")");
  }
}

}  // namespace

void SolveConfig::validate() const {
  if (!(tol > 0.0)) throw std::invalid_argument("solver tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("solver max_iter must be >= 1");
  if (divergence_window < 1) throw std::invalid_argument("divergence window must be >= 1");
  if (step) {
    if (!(*step > 0.0)) throw std::invalid_argument("solver step must be positive");
  } else {
    if (!(c > 0.0)) throw std::invalid_argument("auto step needs a monotonicity modulus c > 0");
    if (!(L >= c)) throw std::invalid_argument("auto step needs L >= c");
  }
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::Diverged: return "diverged";
    default: return "max_iterations";
  }
}

nlohmann::json to_json(const SolveResult& r) {
  nlohmann::json j;
  j["converged"] = r.converged;
  j["status"] = to_string(r.status);
  j["iterations"] = r.iterations;
  j["residuals"] = r.residuals;
  j["q"] = r.q ? nlohmann::json(*r.q) : nlohmann::json(nullptr);
  j["step"] = r.step;
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

double contraction_factor(double c, double L_A, double t) {
  if (!(c > 0.0)) throw std::invalid_argument("contraction_factor: c must be positive");
  if (!(L_A >= c)) throw std::invalid_argument("contraction_factor: need L_A >= c");
  if (!(t > 0.0) || !(t < 2.0 * c / (L_A * L_A))) {
    throw std::invalid_argument("contraction_factor: step outside (0, 2c/L_A^2)");
  }
  return std::sqrt(std::max(0.0, 1.0 - 2.0 * t * c + t * t * L_A * L_A));
}

double residual(const PointwiseLaw& law, const FieldOperator& B, const Field& u, const Field& g) {
  Field r = nemyckii_apply(law, u);
  r += B.apply(u);
  r -= g;
  return l2_norm(r) / std::max(l2_norm(g), kResidualFloor);
}

double residual(const PointwiseLaw& law, const OperatorContext& ctx, const Field& u, const Field& g) {
  return residual(law, SingularOperator(ctx), u, g);
}

SolveResult solve_monotone(const PointwiseLaw& law, const FieldOperator& B, const Field& g,
                           const SolveConfig& cfg) {
  cfg.validate();
  require_paravector(g, "right-hand side g");
  SolveResult res(g.domain_ptr());

  const double L_A = cfg.L + B.norm_bound();
  if (cfg.step) {
    res.step = *cfg.step;
    if (cfg.c > 0.0 && L_A >= cfg.c && res.step < 2.0 * cfg.c / (L_A * L_A)) {
      res.q = contraction_factor(cfg.c, L_A, res.step);
    }
  } else {
    res.step = cfg.c / (L_A * L_A);
    res.q = contraction_factor(cfg.c, L_A, res.step);
  }

  Field& u = res.solution;
  if (cfg.seed) {
    std::mt19937_64 rng(*cfg.seed);
    const auto blades = law.layout == LawLayout::Vector ? vector_blades(law.n) : paravector_blades(law.n);
    u = random_field(g.domain_ptr(), blades, false, rng);
    const double un = l2_norm(u);
    if (un > 0.0) u *= Complex(l2_norm(g) / un);
  }

  const double g_norm = std::max(l2_norm(g), kResidualFloor);
  int growing = 0;
  for (int it = 0;; ++it) {
    Field r = nemyckii_apply(law, u);
    require_paravector(r, "law output");
    r += B.apply(u);
    r -= g;
    const double rel = l2_norm(r) / g_norm;
    if (!std::isfinite(rel)) {
      res.status = SolveStatus::Diverged;
      res.message = "residual became non-finite at iteration " + std::to_string(it);
      break;
    }
    if (!res.residuals.empty() && rel > res.residuals.back()) {
      ++growing;
    } else {
      growing = 0;
    }
    res.residuals.push_back(rel);
    if (rel <= cfg.tol) {
      res.status = SolveStatus::Converged;
      break;
    }
    if (growing >= cfg.divergence_window) {
      res.status = SolveStatus::Diverged;
      res.message = "residual grew for " + std::to_string(growing) +
                    " consecutive iterations; last relative residual " + std::to_string(rel) +
                    ", step " + std::to_string(res.step);
      break;
    }
    if (it == cfg.max_iter) {
      res.status = SolveStatus::MaxIterations;
      res.message = "max_iter reached with relative residual " + std::to_string(rel);
      break;
    }
    r *= Complex(-res.step);
    u += r;
    res.iterations = it + 1;
  }
  res.converged = res.status == SolveStatus::Converged;
  return res;
}

SolveResult solve_monotone(const PointwiseLaw& law, const OperatorContext& ctx, const Field& g,
                           const SolveConfig& cfg) {
  return solve_monotone(law, SingularOperator(ctx), g, cfg);
}

}  // namespace cliffop
