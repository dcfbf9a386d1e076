#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "cliffop/operators.hpp"

using namespace cliffop;

namespace {

KernelParams laplace3() { return KernelParams::laplace(3); }

// sum_v sum_b conj(a) b: the complex coefficient pairing (h^n dropped)
Complex pairing(const Field& a, const Field& b) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) s += std::conj(a.data()[i]) * b.data()[i];
  return s;
}

Field scalar_field(const DomainPtr& d, const std::function<double(std::span<const double>)>& f) {
  return Field::from_function(d, [&](std::span<const double> x) { return Multivector::scalar(d->dim(), f(x)); });
}

}  // namespace

TEST_CASE("quadrature names") {
  CHECK(quadrature_from_string("omit") == Quadrature::SingularCellOmit);
  CHECK(quadrature_from_string("correct") == Quadrature::SingularCellCorrect);
  CHECK(quadrature_from_string(to_string(Quadrature::SingularCellOmit)) == Quadrature::SingularCellOmit);
  CHECK_THROWS(quadrature_from_string("trapezoid"));
}

TEST_CASE("dirac operator on simple fields") {
  const auto d = GridDomain::unit_ball(3, 8);
  const OperatorContext ctx(d, laplace3());

  const auto c = Field::from_function(d, [](auto) { return Multivector::scalar(3, 2.0) + Multivector::blade(3, 5, 1.0); });
  CHECK(l2_norm(dirac_apply(c, ctx)) < 1e-13);

  // u = x1 is reproduced exactly by every stencil in use
  const auto x1 = scalar_field(d, [](auto x) { return x[0]; });
  const auto e1 = Field::from_function(d, [](auto) { return Multivector::blade(3, 1); });
  StencilDiagnostics diag;
  CHECK(l2_norm(dirac_apply(x1, ctx, &diag) - e1) < 1e-12);
  // the ball's pole voxels have a single neighbour along one axis
  CHECK(diag.first_order_fallbacks > 0);
  const auto box = GridDomain::unit_box(3, 5);
  StencilDiagnostics box_diag;
  const auto bx1 = scalar_field(box, [](auto x) { return x[0]; });
  const auto be1 = Field::from_function(box, [](auto) { return Multivector::blade(3, 1); });
  CHECK(l2_norm(dirac_apply(bx1, OperatorContext(box, laplace3()), &box_diag) - be1) < 1e-12);
  CHECK(box_diag.first_order_fallbacks == 0);

  // D_ia 1 = i a
  const KernelParams p(3, Paravector(1.0, {0.5, -0.2, 0.3}));
  const OperatorContext ctx_a(d, p);
  const auto one = scalar_field(d, [](auto) { return 1.0; });
  const auto expect = Field::from_function(d, [&](auto) { return p.a.to_multivector() * Complex(0, 1); });
  CHECK(l2_norm(dirac_apply(one, ctx_a) - expect) < 1e-13);
}

TEST_CASE("dirac operator stencil fallbacks") {
  // two cells thick along the first axis: only first-order differences fit
  std::vector<std::uint8_t> mask(4 * 4, 0);
  for (int j = 0; j < 4; ++j) {
    mask[1 * 4 + j] = 1;
    mask[2 * 4 + j] = 1;
  }
  const auto thin = GridDomain::from_mask({{0, 1}, {0, 1}}, 4, mask);
  const OperatorContext ctx(thin, KernelParams::laplace(2));
  StencilDiagnostics diag;
  const auto x1 = scalar_field(thin, [](auto x) { return x[0]; });
  const auto r = dirac_apply(x1, ctx, &diag);
  CHECK(diag.first_order_fallbacks == thin->voxel_count());
  CHECK(r.at(0)[1].real() == doctest::Approx(1.0));

  std::vector<std::uint8_t> lone(9, 0);
  lone[4] = 1;
  const auto single = GridDomain::from_mask({{0, 1}, {0, 1}}, 3, lone);
  const OperatorContext ctx1(single, KernelParams::laplace(2));
  CHECK_THROWS_AS(dirac_apply(scalar_field(single, [](auto) { return 1.0; }), ctx1), StencilError);
}

TEST_CASE("teodorescu transform: omitted self cell equals the direct sum") {
  const auto d = GridDomain::unit_ball(3, 6);
  const KernelParams p(3, Paravector(0.7, {0.3, -0.5, 0.2}));
  const OperatorContext ctx(d, p, 2, Quadrature::SingularCellOmit);
  std::mt19937_64 rng(21);
  const auto blades = paravector_blades(3);
  const auto u = random_field(d, blades, true, rng);
  const auto t = teodorescu_apply(u, ctx);
  double err = 0.0, ref = 0.0;
  for (std::size_t v = 0; v < d->voxel_count(); ++v) {
    const auto direct = teodorescu_at(u, ctx, d->voxel_center(v));
    err = std::max(err, max_abs_diff(direct, t.at(v)));
    ref = std::max(ref, norm(direct));
  }
  CHECK(err < 1e-12 * ref);
}

TEST_CASE("teodorescu transform: zero, linearity, symmetry") {
  const auto d = GridDomain::unit_ball(3, 8);
  const OperatorContext ctx(d, laplace3());
  CHECK(l2_norm(teodorescu_apply(Field(d), ctx)) == 0.0);

  std::mt19937_64 rng(22);
  const auto blades = paravector_blades(3);
  const auto u = random_field(d, blades, false, rng), v = random_field(d, blades, false, rng);
  const auto lhs = teodorescu_apply(u + v, ctx);
  const auto rhs = teodorescu_apply(u, ctx) + teodorescu_apply(v, ctx);
  CHECK(l2_norm(lhs - rhs) < 1e-13 * l2_norm(lhs));

  // u = 1 on a symmetric ball: the vector part cancels at the centre
  const auto one = scalar_field(d, [](auto) { return 1.0; });
  const std::vector<double> centre{0, 0, 0};
  const auto t0 = teodorescu_at(one, ctx, centre);
  CHECK(norm(t0) < 1e-14);
  // and is nonzero off centre, pointing inward (e(x) = -x/(4 pi |x|^3))
  const std::vector<double> off{0.5, 0, 0};
  CHECK(teodorescu_at(one, ctx, off)[1].real() < -1e-3);
}

TEST_CASE("singular operator basics") {
  const auto d = GridDomain::unit_ball(3, 6);
  const OperatorContext ctx(d, laplace3());
  CHECK(l2_norm(singular_B_apply(Field(d), ctx)) == 0.0);

  // adjoint identity (B u, v) = (u, B* v) in the complex pairing
  for (const auto& p : {laplace3(), KernelParams(3, Paravector(0.7, {0.3, -0.5, 0.2}))}) {
    for (auto q : {Quadrature::SingularCellCorrect, Quadrature::SingularCellOmit}) {
      const OperatorContext c(d, p, 2, q);
      std::mt19937_64 rng(23);
      const std::vector<Blade> all{0, 1, 2, 3, 4, 5, 6, 7};
      const auto u = random_field(d, all, true, rng), v = random_field(d, all, true, rng);
      const Complex a = pairing(singular_B_apply(u, c), v);
      const Complex b = pairing(u, singular_B_adjoint_apply(v, c));
      CHECK(std::abs(a - b) < 1e-12 * std::abs(a));
    }
  }
}

TEST_CASE("dense assembly agrees with the matrix-free operator") {
  const auto d = GridDomain::unit_ball(3, 6);
  const KernelParams p(3, Paravector(0.7, {0.3, -0.5, 0.2}));
  const OperatorContext ctx(d, p);
  const auto dense = assemble_dense(ctx);
  CHECK(dense.blades == paravector_blades(3));
  std::mt19937_64 rng(24);
  const auto u = random_field(d, dense.blades, true, rng);
  const Eigen::VectorXcd x = to_coordinates(u, dense.blades);
  CHECK(l2_norm(from_coordinates(x, d, dense.blades) - u) == 0.0);
  const auto bu = from_coordinates(dense.matrix * x, d, dense.blades);
  CHECK(l2_norm(bu - singular_B_apply(u, ctx)) < 1e-12 * l2_norm(bu));
}

TEST_CASE("norm and positivity on the unit ball, n = 3, a = 0, N = 8") {
  const auto d = GridDomain::unit_ball(3, 8);
  const OperatorContext ctx(d, laplace3());
  const auto dense = assemble_dense(ctx);
  CHECK(dense.blades == vector_blades(3));
  const auto s = spectral_summary(dense.matrix);
  CHECK(s.max_singular_value <= 1.15);
  CHECK(s.min_hermitian_eigenvalue >= -0.05);

  const auto ne = power_iteration_norm(dense.matrix, 60);
  for (std::size_t i = 1; i < ne.history.size(); ++i) CHECK(ne.history[i] >= ne.history[i - 1] - 1e-12);
  CHECK(ne.value == doctest::Approx(s.max_singular_value).epsilon(0.02));
  CHECK(ne.value <= s.max_singular_value + 1e-12);

  const auto mf = operator_norm_estimate_matrix_free(ctx, 60);
  CHECK(mf.value == doctest::Approx(s.max_singular_value).epsilon(0.02));

  const auto pe = positivity_estimate(ctx, 8, true);
  CHECK(pe.min_rayleigh >= -0.05);
  REQUIRE(pe.min_eigenvalue.has_value());
  CHECK(*pe.min_eigenvalue == doctest::Approx(s.min_hermitian_eigenvalue).epsilon(1e-6));

  // the kernel of P T is large (divergence-free fields); B vanishes on it
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense.matrix.real());
  const Eigen::VectorXcd u = es.eigenvectors().col(0).cast<std::complex<double>>();
  CHECK(std::abs(es.eigenvalues()(0)) < 1e-10);
  CHECK((dense.matrix * u).norm() < 1e-10);
  CHECK(std::abs(u.dot(dense.matrix * u)) < 1e-10);
}

TEST_CASE("zero operator test double") {
  const auto d = GridDomain::unit_ball(3, 4);
  const ZeroOperator z;
  std::mt19937_64 rng(25);
  const auto blades = vector_blades(3);
  CHECK(l2_norm(z.apply(random_field(d, blades, false, rng))) == 0.0);
  CHECK(z.norm_bound() == 0.0);
}

TEST_CASE("subspace preservation") {
  const auto d = GridDomain::unit_ball(3, 6);
  std::mt19937_64 rng(26);
  {
    const OperatorContext ctx(d, laplace3());
    const auto blades = vector_blades(3);
    const auto r = subspace_preservation_check(random_field(d, blades, false, rng), ctx);
    CHECK(r.status == CheckStatus::Pass);
    CHECK(r.expected == "vector");
  }
  {
    const OperatorContext ctx(d, KernelParams(3, Paravector(1.0, {0.4, 0.0, -0.2})));
    const auto blades = paravector_blades(3);
    const auto r = subspace_preservation_check(random_field(d, blades, false, rng), ctx);
    CHECK(r.status == CheckStatus::Pass);
    CHECK(r.expected == "paravector");
    CHECK(r.off_fraction <= 1e-10);
  }
  {
    const OperatorContext ctx(d, laplace3());
    const std::vector<Blade> bivector{3};
    const auto r = subspace_preservation_check(random_field(d, bivector, false, rng), ctx);
    CHECK(r.status == CheckStatus::Skipped);
    CHECK_FALSE(r.note.empty());
  }
}

TEST_CASE("principal-value derivatives") {
  const auto u8 = [](const DomainPtr& d) {
    return scalar_field(d, [](auto x) { return std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / 0.18); });
  };
  CHECK(derived_free_coefficient(3) == doctest::Approx(-1.0 / 3.0));
  {
    const auto d = GridDomain::unit_ball(3, 6);
    const OperatorContext ctx(d, laplace3());
    CHECK(l2_norm(pv_derivative_apply(Field(d), ctx, 0, 0, -1.0 / 3.0)) == 0.0);
    const auto off = fit_free_term(u8(d), ctx, 0, 1);
    CHECK(off.fitted == 0.0);
  }
  double prev_fit = 1e300, prev_derived = 1e300;
  for (int N : {6, 8}) {
    const auto d = GridDomain::unit_ball(3, N);
    const OperatorContext ctx(d, laplace3());
    const auto f = fit_free_term(u8(d), ctx, 2, 2);
    CAPTURE(N);
    CHECK(f.fitted < 0.0);
    CHECK(f.discrepancy_fitted <= f.discrepancy_derived + 1e-12);
    CHECK(f.discrepancy_fitted < prev_fit);
    CHECK(f.discrepancy_derived < prev_derived);
    prev_fit = f.discrepancy_fitted;
    prev_derived = f.discrepancy_derived;
  }
}

TEST_CASE("Borel-Pompeiu residual") {
  const auto bump = [](const DomainPtr& d) {
    return scalar_field(d, [](auto x) { return std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / 0.18); });
  };
  {
    const auto d = GridDomain::unit_ball(3, 6);
    const OperatorContext ctx(d, laplace3());
    const auto z = borel_pompeiu_residual(Field(d), ctx);
    CHECK(z.interior_residual == 0.0);
    CHECK(z.exterior_norm == 0.0);
  }
  const auto d8 = GridDomain::unit_ball(3, 8), d10 = GridDomain::unit_ball(3, 10);
  const auto r8 = borel_pompeiu_residual(bump(d8), OperatorContext(d8, laplace3()));
  const auto r10 = borel_pompeiu_residual(bump(d10), OperatorContext(d10, laplace3()));
  CHECK(r8.interior_voxels > 0);
  CHECK(r8.collar_points > 0);
  CHECK(r10.interior_residual < r8.interior_residual);
  CHECK(r10.exterior_norm < r8.exterior_norm);
}
