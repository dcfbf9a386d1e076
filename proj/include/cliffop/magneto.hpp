#pragma once

// Magnetization problem in three dimensions: find M with
//   F(M(x)) - (1/4 pi) grad div int_G M(y) / |x - y| dy = H_a(x),
// where the integral term is the a = 0 singular operator B applied to M.

#include <optional>
#include <string>

#include <json.hpp>

#include "cliffop/nemyckii.hpp"
#include "cliffop/operators.hpp"
#include "cliffop/solver.hpp"

namespace cliffop {

struct MHCurveSpec {
  enum class Family { Linear, Saturating };
  Family family = Family::Linear;
  double chi = 1.0;    // linear: f(M) = M / chi
  double chi0 = 1.0;   // saturating: f(M) = M / chi0 + beta M |M| / (Ms + |M|)
  double ms = 1.0;
  double beta = 0.5;

  void validate() const;
};

/// Vector-layout law for n = 3 with its declared constants.
PointwiseLaw mh_law(const MHCurveSpec& spec);

struct DemagPaths {
  Field composition;         // singular_B_apply with a = 0
  Field potential_gradient;  // grad of phi(x) = (1/4 pi) sum <x - y, M(y)> / |x - y|^3 h^3
  double relative_difference = 0.0;
};

/// ctx must be three-dimensional with a = 0; M real vector-valued.
DemagPaths demag_apply(const Field& M, const OperatorContext& ctx);

/// The composition path only.
Field demag_field(const Field& M, const OperatorContext& ctx);

struct RepresentationCheck {
  double fitted_prefactor = 0.0;   // least-squares multiplier of the unnormalised grad-div term
  double expected_prefactor = 0.0; // 1 / sigma_3 = 1 / (4 pi)
  double alternative_prefactor = 0.0;  // 1 / (2^n pi^{n/2})
  double residual_after_fit = 0.0;
};

RepresentationCheck representation_cross_check(const Field& M, const OperatorContext& ctx);

struct InequalityReport {
  double hi_dot_m = 0.0;
  double m_norm_sq = 0.0;
  bool ineq2_pass = true;  // (H_i, M) <= eps
  bool ineq3_pass = true;  // |(H_i, M)| <= (1 + delta) ||M||^2
  double eps = 0.0;
  double delta = 0.0;
};

nlohmann::json to_json(const InequalityReport& r);

/// H_i = -B M. eps defaults to 1e-6 ||M||^2; delta is the admitted norm excess.
InequalityReport verify_inequalities(const Field& M, const OperatorContext& ctx,
                                     double delta = 0.0, std::optional<double> eps = std::nullopt);

/// Mean of (B M)_3 over interior voxels of a ball for M = e_3.
double uniform_ball_demag_factor(const OperatorContext& ctx);

struct MagnetoProblem {
  DomainPtr domain;
  MHCurveSpec curve;
  Field applied;
  SolveConfig solver;
  Quadrature quadrature = Quadrature::SingularCellCorrect;
  SamplingOptions checks;  // for the monotone and Lipschitz checks run before solving

  MagnetoProblem(DomainPtr d, MHCurveSpec c, Field h)
      : domain(std::move(d)), curve(c), applied(std::move(h)) {
    checks.samples = 20000;
  }
};

class PropertyCheckFailed : public std::runtime_error {
 public:
  PropertyCheckFailed(const std::string& what, PropertyReport r)
      : std::runtime_error(what), report(std::move(r)) {}
  PropertyReport report;
};

struct MagnetoOutcome {
  PropertyReport monotone;
  PropertyReport lipschitz;
  SolveResult solve;
  InequalityReport inequalities;

  explicit MagnetoOutcome(DomainPtr d) : solve(std::move(d)) {}
};

/// Runs the law checks, solves with c = c_hat and L = max(L_hat, declared
/// modulus), then evaluates the inequalities at the solution. Throws
/// PropertyCheckFailed before iterating when a check finds a counterexample.
MagnetoOutcome solve_magnetization(const MagnetoProblem& p);

/// Field of a point dipole with moment m at p: (3 (m.r^) r^ - m) / (4 pi |r|^3).
Field dipole_field(DomainPtr domain, const std::vector<double>& moment,
                   const std::vector<double>& position);
Field constant_vector_field(DomainPtr domain, const std::vector<double>& value);

}  // namespace cliffop
