#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "cliffop/operators.hpp"

namespace cliffop {

Eigen::VectorXcd to_coordinates(const Field& u, const std::vector<Blade>& blades) {
  Eigen::VectorXcd x(static_cast<Eigen::Index>(u.voxel_count() * blades.size()));
  Eigen::Index i = 0;
  for (std::size_t v = 0; v < u.voxel_count(); ++v) {
    const auto vals = u.values(v);
    for (Blade b : blades) x[i++] = vals[b];
  }
  return x;
}

Field from_coordinates(const Eigen::VectorXcd& x, DomainPtr domain, const std::vector<Blade>& blades) {
  Field u(std::move(domain));
  if (static_cast<std::size_t>(x.size()) != u.voxel_count() * blades.size()) {
    throw std::invalid_argument("from_coordinates: vector length does not match the subspace");
  }
  Eigen::Index i = 0;
  for (std::size_t v = 0; v < u.voxel_count(); ++v) {
    auto vals = u.values(v);
    for (Blade b : blades) vals[b] = x[i++];
  }
  return u;
}

DenseOperator assemble_dense(const OperatorContext& ctx, const std::vector<Blade>& blades) {
  const std::size_t voxels = ctx.domain().voxel_count();
  const auto dim = static_cast<Eigen::Index>(voxels * blades.size());
  DenseOperator op{blades, Eigen::MatrixXcd::Zero(dim, dim)};
  Field unit(ctx.domain_ptr());
  Eigen::Index col = 0;
  for (std::size_t v = 0; v < voxels; ++v) {
    for (Blade b : blades) {
      unit.values(v)[b] = 1.0;
      op.matrix.col(col++) = to_coordinates(singular_B_apply(unit, ctx), blades);
      unit.values(v)[b] = 0.0;
    }
  }
  return op;
}

SpectralSummary spectral_summary(const Eigen::MatrixXcd& a) {
  SpectralSummary s;
  const bool real = a.imag().cwiseAbs().maxCoeff() == 0.0;
  if (real) {
    const Eigen::MatrixXd r = a.real();
    const Eigen::MatrixXd sym = 0.5 * (r + r.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
    s.min_hermitian_eigenvalue = eig.eigenvalues().minCoeff();
    Eigen::BDCSVD<Eigen::MatrixXd> svd(r);
    s.max_singular_value = svd.singularValues().maxCoeff();
    s.min_singular_value = svd.singularValues().minCoeff();
  } else {
    const Eigen::MatrixXcd herm = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(herm, Eigen::EigenvaluesOnly);
    s.min_hermitian_eigenvalue = eig.eigenvalues().minCoeff();
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(a);
    s.max_singular_value = svd.singularValues().maxCoeff();
    s.min_singular_value = svd.singularValues().minCoeff();
  }
  return s;
}

namespace {

template <typename ApplyGram>
NormEstimate power_iterate(Eigen::VectorXcd x, int iterations, ApplyGram&& gram) {
  if (iterations < 1) throw std::invalid_argument("power iteration needs iterations >= 1");
  NormEstimate est;
  x.normalize();
  for (int it = 0; it < iterations; ++it) {
    const Eigen::VectorXcd z = gram(x);
    const double rq = std::max(0.0, x.dot(z).real());
    est.value = std::sqrt(rq);
    est.history.push_back(est.value);
    const double zn = z.norm();
    if (zn == 0.0) break;
    x = z / zn;
  }
  return est;
}

Eigen::VectorXcd random_start(Eigen::Index dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXcd x(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double re = g(rng);
    x[i] = Complex(re, g(rng));
  }
  return x;
}

}  // namespace

NormEstimate power_iteration_norm(const Eigen::MatrixXcd& a, int iterations, std::uint64_t seed) {
  return power_iterate(random_start(a.cols(), seed), iterations,
                       [&](const Eigen::VectorXcd& x) -> Eigen::VectorXcd {
                         return a.adjoint() * (a * x);
                       });
}

NormEstimate operator_norm_estimate(const OperatorContext& ctx, int iterations, std::uint64_t seed) {
  const DenseOperator op = assemble_dense(ctx);
  return power_iteration_norm(op.matrix, iterations, seed);
}

NormEstimate operator_norm_estimate_matrix_free(const OperatorContext& ctx, int iterations,
                                                std::uint64_t seed) {
  const auto blades = natural_subspace(ctx.params());
  const DomainPtr& dom = ctx.domain_ptr();
  const auto dim = static_cast<Eigen::Index>(dom->voxel_count() * blades.size());
  // B vanishes on grade >= 2 inputs, so B^*B can be iterated on the
  // natural subspace alone.
  return power_iterate(random_start(dim, seed), iterations,
                       [&](const Eigen::VectorXcd& x) -> Eigen::VectorXcd {
                         const Field u = from_coordinates(x, dom, blades);
                         const Field g = singular_B_adjoint_apply(singular_B_apply(u, ctx), ctx);
                         return to_coordinates(g, blades);
                       });
}

PositivityEstimate positivity_estimate(const OperatorContext& ctx, int samples, bool dense,
                                       std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("positivity_estimate needs samples >= 1");
  const auto blades = natural_subspace(ctx.params());
  const bool complex_values = !(ctx.params().a0() == 0.0 && !ctx.params().has_vector_part());
  std::mt19937_64 rng(seed);
  PositivityEstimate est;
  est.min_rayleigh = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    const Field u = random_field(ctx.domain_ptr(), blades, complex_values, rng);
    const double uu = l2_inner(u, u);
    est.min_rayleigh = std::min(est.min_rayleigh, l2_inner(singular_B_apply(u, ctx), u) / uu);
  }
  if (dense) {
    est.min_eigenvalue = spectral_summary(assemble_dense(ctx, blades).matrix).min_hermitian_eigenvalue;
  }
  return est;
}

}  // namespace cliffop
