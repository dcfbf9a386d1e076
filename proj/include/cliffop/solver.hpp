#pragma once

// A u = F(u) + B u = g by the damped iteration u <- u - t (F(u) + B u - g).
// With F strongly monotone (modulus c) and Lipschitz (L), B positive with
// norm at most |B|, the map is a contraction for 0 < t < 2c / L_A^2 where
// L_A = L + |B|.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cliffop/nemyckii.hpp"
#include "cliffop/operators.hpp"

namespace cliffop {

struct SolveConfig {
  std::optional<double> step;          // nullopt: auto, t = c / L_A^2
  double tol = 1e-8;
  int max_iter = 10000;
  std::optional<std::uint64_t> seed;   // random initial guess; zero field when unset
  double c = 0.0;                      // monotonicity modulus of F
  double L = 0.0;                      // Lipschitz bound of F
  int divergence_window = 50;

  void validate() const;
};

enum class SolveStatus { Converged, MaxIterations, Diverged };
std::string to_string(SolveStatus s);

struct SolveResult {
  Field solution;
  int iterations = 0;
  std::vector<double> residuals;  // relative residual of every iterate, the last is the solution's
  SolveStatus status = SolveStatus::MaxIterations;
  bool converged = false;
  double step = 0.0;
  std::optional<double> q;        // certified contraction factor
  std::string message;

  explicit SolveResult(DomainPtr d) : solution(std::move(d)) {}
};

nlohmann::json to_json(const SolveResult& r);

/// q = sqrt(1 - 2 t c + t^2 L_A^2). Throws std::invalid_argument outside
/// c > 0, L_A >= c, 0 < t < 2c / L_A^2.
double contraction_factor(double c, double L_A, double t);

/// ||F(u) + B u - g|| / max(||g||, eps).
double residual(const PointwiseLaw& law, const FieldOperator& B, const Field& u, const Field& g);
double residual(const PointwiseLaw& law, const OperatorContext& ctx, const Field& u, const Field& g);

/// Throws NotAParavector when g (or the law's output) leaves the paravector
/// subspace.
SolveResult solve_monotone(const PointwiseLaw& law, const FieldOperator& B, const Field& g,
                           const SolveConfig& cfg);
SolveResult solve_monotone(const PointwiseLaw& law, const OperatorContext& ctx, const Field& g,
                           const SolveConfig& cfg);

}  // namespace cliffop
