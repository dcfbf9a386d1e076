#pragma once

// Discrete disturbed Dirac operator D_{ia}, Teodorescu transform T_{ia} and
// the singular operator B = D_{ia} P T_{ia} on voxel grids.
//
// T is a midpoint-rule volume potential. Two treatments of the singular cell:
//   SingularCellOmit     direct sum of e_{ia}(x - y) u(y) h^n over y != x.
//   SingularCellCorrect  T u = e^{-i<a,x>} (D_h - i a0) W with
//                        W(x) = sum_y K_{a0}(x - y) e^{i<a,y>} u(y) h^n, whose
//                        self cell uses the mean of K_{a0} over the ball of
//                        equal volume. This is the default for B.
// T is defined on all of R^n, so B evaluates it on a padded lattice around G
// and uses centred differences at every voxel of G.

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cliffop/field_grid.hpp"
#include "cliffop/kernels.hpp"

namespace cliffop {

enum class Quadrature { SingularCellOmit, SingularCellCorrect };

std::string to_string(Quadrature q);
Quadrature quadrature_from_string(const std::string& s);

class StencilError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
struct OperatorCache;
}

class OperatorContext {
 public:
  OperatorContext(DomainPtr domain, KernelParams params, int exterior_pad = 2,
                  Quadrature quadrature = Quadrature::SingularCellCorrect);

  const GridDomain& domain() const { return *domain_; }
  const DomainPtr& domain_ptr() const { return domain_; }
  const KernelParams& params() const { return params_; }
  int exterior_pad() const { return exterior_pad_; }
  Quadrature quadrature() const { return quadrature_; }

  const detail::OperatorCache& cache() const { return *cache_; }

 private:
  DomainPtr domain_;
  KernelParams params_;
  int exterior_pad_;
  Quadrature quadrature_;
  std::shared_ptr<const detail::OperatorCache> cache_;
};

struct StencilDiagnostics {
  std::size_t first_order_fallbacks = 0;  // (voxel, axis) pairs
};

/// D_{ia} u with mask-only data: centred differences where both neighbours
/// are in G, second-order one-sided ones otherwise, first order as a last
/// resort. Throws StencilError for a voxel with no neighbour along an axis.
Field dirac_apply(const Field& u, const OperatorContext& ctx, StencilDiagnostics* diag = nullptr);

/// T_{ia} u at the voxels of G, using ctx.quadrature().
Field teodorescu_apply(const Field& u, const OperatorContext& ctx);

/// T_{ia} u at an arbitrary point (direct sum, singular cell omitted if the
/// point is a voxel centre).
Multivector teodorescu_at(const Field& u, const OperatorContext& ctx, std::span<const double> x);

Field singular_B_apply(const Field& u, const OperatorContext& ctx);
/// Exact discrete adjoint of singular_B_apply under l2_inner.
Field singular_B_adjoint_apply(const Field& u, const OperatorContext& ctx);

/// Principal-value quadrature of d/dx_k (T u)_j for scalar u, plus
/// free_coefficient * delta_jk * u(x). j, k are zero-based.
Field pv_derivative_apply(const Field& u, const OperatorContext& ctx, int j, int k,
                          double free_coefficient);

/// Free coefficient of the Calderon-Zygmund derivative in the 1/sigma_n
/// normalisation: the trace of the free term is -1, spread over n axes.
double derived_free_coefficient(int n);

struct FreeTermFit {
  int j = 0, k = 0;
  double fitted = 0.0;               // least-squares free coefficient (0 when j != k)
  double discrepancy_fitted = 0.0;   // rel. L2 of pv(fitted) against finite differences
  double discrepancy_derived = 0.0;  // same with derived_free_coefficient(n)
};

/// Compares pv_derivative_apply with centred differences of the direct
/// (omitted-cell) Teodorescu component j along axis k, at voxels whose
/// neighbours stay in G.
FreeTermFit fit_free_term(const Field& u, const OperatorContext& ctx, int j, int k);

struct BorelPompeiuResult {
  double interior_residual = 0.0;  // ||D T u - u|| / ||u|| over the interior voxels
  double exterior_norm = 0.0;      // ||D T u|| over the collar, relative to ||u||
  std::size_t interior_voxels = 0;
  std::size_t collar_points = 0;
};

/// Flags voxels all of whose cells within Euclidean index distance `depth`
/// belong to G.
std::vector<std::uint8_t> interior_voxels(const GridDomain& domain, int depth);

/// Residual over interior_voxels(domain, 2); collar points are lattice cells
/// outside G within exterior_pad of it.
BorelPompeiuResult borel_pompeiu_residual(const Field& u, const OperatorContext& ctx);

// --- dense assembly and spectral estimates --------------------------------

/// Blade subspace on which B is assembled: vector blades when a = 0,
/// paravector blades otherwise.
std::vector<Blade> natural_subspace(const KernelParams& params);

struct DenseOperator {
  std::vector<Blade> blades;       // coordinate j = voxel * blades.size() + b
  Eigen::MatrixXcd matrix;         // w.r.t. the coefficient inner product (h^n cancels)
};

DenseOperator assemble_dense(const OperatorContext& ctx, const std::vector<Blade>& blades);
inline DenseOperator assemble_dense(const OperatorContext& ctx) {
  return assemble_dense(ctx, natural_subspace(ctx.params()));
}

/// Field <-> coordinate vector on the dense subspace.
Eigen::VectorXcd to_coordinates(const Field& u, const std::vector<Blade>& blades);
Field from_coordinates(const Eigen::VectorXcd& x, DomainPtr domain, const std::vector<Blade>& blades);

struct SpectralSummary {
  double min_hermitian_eigenvalue = 0.0;  // of (A + A^H)/2
  double max_singular_value = 0.0;
  double min_singular_value = 0.0;
};

SpectralSummary spectral_summary(const Eigen::MatrixXcd& a);

struct NormEstimate {
  double value = 0.0;
  std::vector<double> history;  // sqrt of the Rayleigh quotient after each step
};

/// Power iteration on A^H A, started from a seeded random vector.
NormEstimate power_iteration_norm(const Eigen::MatrixXcd& a, int iterations, std::uint64_t seed = 7);

/// Power iteration on B^H B with the adjoint taken from the dense matrix.
NormEstimate operator_norm_estimate(const OperatorContext& ctx, int iterations, std::uint64_t seed = 7);
/// Same through singular_B_adjoint_apply, for grids too large to assemble.
NormEstimate operator_norm_estimate_matrix_free(const OperatorContext& ctx, int iterations,
                                                std::uint64_t seed = 7);

struct PositivityEstimate {
  double min_rayleigh = 0.0;                     // over random unit fields
  std::optional<double> min_eigenvalue;          // of the symmetrised dense matrix
};

PositivityEstimate positivity_estimate(const OperatorContext& ctx, int samples, bool dense,
                                       std::uint64_t seed = 11);

enum class CheckStatus { Pass, Fail, Skipped };
std::string to_string(CheckStatus s);

struct SubspaceReport {
  CheckStatus status = CheckStatus::Skipped;
  std::string expected;  // "vector" or "paravector"
  double off_fraction = 0.0;
  std::string note;
};

SubspaceReport subspace_preservation_check(const Field& u, const OperatorContext& ctx,
                                           double tol = 1e-10);

// --- generic linear operators for the solver ------------------------------

class FieldOperator {
 public:
  virtual ~FieldOperator() = default;
  virtual Field apply(const Field& u) const = 0;
  /// Upper bound for the operator norm used in step-size selection.
  virtual double norm_bound() const = 0;
};

class SingularOperator final : public FieldOperator {
 public:
  explicit SingularOperator(OperatorContext ctx) : ctx_(std::move(ctx)) {}
  Field apply(const Field& u) const override { return singular_B_apply(u, ctx_); }
  double norm_bound() const override { return 1.0; }
  const OperatorContext& context() const { return ctx_; }

 private:
  OperatorContext ctx_;
};

class ZeroOperator final : public FieldOperator {
 public:
  Field apply(const Field& u) const override { return Field(u.domain_ptr()); }
  double norm_bound() const override { return 0.0; }
};

}  // namespace cliffop
