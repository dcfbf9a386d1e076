#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "cliffop/magneto.hpp"

using namespace cliffop;

namespace {

const double kPi = std::numbers::pi;

Field smooth_m(const DomainPtr& d) {
  return Field::from_function(d, [](std::span<const double> x) {
    Multivector m(3);
    m[1] = x[1] * x[2];
    m[2] = 1.0 + x[0];
    m[4] = x[0] * x[0];
    return m;
  });
}

MHCurveSpec linear(double chi) {
  MHCurveSpec s;
  s.family = MHCurveSpec::Family::Linear;
  s.chi = chi;
  return s;
}

MHCurveSpec saturating() {
  MHCurveSpec s;
  s.family = MHCurveSpec::Family::Saturating;
  s.chi0 = 2.0;
  s.ms = 1.0;
  s.beta = 0.5;
  return s;
}

}  // namespace

TEST_CASE("M-H curves") {
  CHECK_THROWS_AS(linear(0.0).validate(), std::invalid_argument);
  auto bad = saturating();
  bad.ms = -1.0;
  CHECK_THROWS_AS(mh_law(bad), std::invalid_argument);

  const auto lin = mh_law(linear(4.0));
  const std::vector<double> x{0, 0, 0}, m{1, 2, 2};
  CHECK(lin(x, m)[2].real() == doctest::Approx(0.5));

  // f(M) = M/chi0 + beta M |M| / (Ms + |M|) with |M| = 3
  const auto sat = mh_law(saturating());
  CHECK(sat(x, m)[4].real() == doctest::Approx(2.0 / 2.0 + 0.5 * 2.0 * 3.0 / 4.0));

  SamplingOptions opt;
  opt.samples = 20000;
  const auto mono = check_monotone(sat, true, opt);
  CHECK(mono.verdict == Verdict::NoCounterexample);
  CHECK(mono.estimates.at("modulus_c_hat") >= 0.5 - 1e-9);
  const auto lip = check_lipschitz(sat, opt);
  CHECK(lip.verdict == Verdict::NoCounterexample);
  CHECK(lip.estimates.at("lipschitz_hat") <= 0.5 + 2 * 0.5);
}

TEST_CASE("demagnetization field") {
  const auto d = GridDomain::unit_ball(3, 6);
  const OperatorContext ctx(d, KernelParams::laplace(3));
  const auto z = demag_apply(Field(d), ctx);
  CHECK(l2_norm(z.composition) == 0.0);
  CHECK(l2_norm(z.potential_gradient) == 0.0);

  std::mt19937_64 rng(51);
  const auto pb = paravector_blades(3);
  CHECK_THROWS_AS(demag_field(random_field(d, pb, false, rng), ctx), std::invalid_argument);
  const OperatorContext disturbed(d, KernelParams(3, Paravector(1.0, {0, 0, 0})));
  CHECK_THROWS_AS(demag_field(smooth_m(d), disturbed), std::invalid_argument);
}

TEST_CASE("uniformly magnetized ball") {
  double prev = 1.0;
  for (int N : {8, 10, 12}) {
    const auto d = GridDomain::unit_ball(3, N);
    const double f = uniform_ball_demag_factor(OperatorContext(d, KernelParams::laplace(3)));
    CAPTURE(N);
    CHECK(std::abs(f - 1.0 / 3.0) <= 0.15 / 3.0);
    CHECK(std::abs(f - 1.0 / 3.0) < prev);
    prev = std::abs(f - 1.0 / 3.0);
  }
}

TEST_CASE("composition and potential-gradient paths agree under refinement") {
  double prev = 1.0;
  for (int N : {6, 8, 10}) {
    const auto d = GridDomain::unit_ball(3, N);
    const OperatorContext ctx(d, KernelParams::laplace(3));
    const auto p = demag_apply(smooth_m(d), ctx);
    CAPTURE(N);
    CHECK(p.relative_difference < prev);
    CHECK(p.relative_difference < 0.1);
    prev = p.relative_difference;
  }
}

TEST_CASE("grad-div prefactor") {
  const auto d = GridDomain::unit_ball(3, 10);
  const auto rc = representation_cross_check(smooth_m(d), OperatorContext(d, KernelParams::laplace(3)));
  CHECK(rc.expected_prefactor == doctest::Approx(1.0 / (4 * kPi)));
  CHECK(std::abs(rc.fitted_prefactor / rc.expected_prefactor - 1.0) < 0.05);
  CHECK(std::abs(rc.fitted_prefactor / rc.alternative_prefactor - 1.0) > 1.0);
  CHECK(rc.residual_after_fit < 0.1);
}

TEST_CASE("linear law matches the dense solve of (I/chi + B) M = H_a") {
  const auto d = GridDomain::unit_ball(3, 8);
  const auto ha = constant_vector_field(d, {0.0, 0.0, 1.0});
  MagnetoProblem p(d, linear(1.0), ha);
  p.solver.tol = 1e-10;
  const auto out = solve_magnetization(p);
  REQUIRE(out.solve.converged);

  const OperatorContext ctx(d, KernelParams::laplace(3));
  const auto dense = assemble_dense(ctx);
  const Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(dense.matrix.rows(), dense.matrix.cols()) + dense.matrix;
  const auto exact = from_coordinates(A.partialPivLu().solve(to_coordinates(ha, dense.blades)), d, dense.blades);
  CHECK(l2_norm(out.solve.solution - exact) / l2_norm(exact) <= 1e-6);
  CHECK(out.inequalities.ineq2_pass);
  CHECK(out.inequalities.ineq3_pass);
  // a sphere in a uniform field magnetizes nearly uniformly: M ~ chi/(1 + chi/3) H_a inside
  const auto interior = interior_voxels(*d, 2);
  double mz = 0.0;
  int count = 0;
  for (std::size_t v = 0; v < d->voxel_count(); ++v) {
    if (!interior[v]) continue;
    mz += out.solve.solution.values(v)[4].real();
    ++count;
  }
  CHECK(mz / count == doctest::Approx(0.75).epsilon(0.05));
}

TEST_CASE("saturating law in a weak dipole field") {
  const auto d = GridDomain::unit_ball(3, 8);
  const auto ha = dipole_field(d, {0, 0, 1}, {0, 0, 2.5});
  MagnetoProblem p(d, saturating(), ha);
  const auto out = solve_magnetization(p);
  CHECK(out.solve.converged);
  CHECK(out.solve.residuals.back() <= p.solver.tol);
  CHECK(residual(mh_law(p.curve), OperatorContext(d, KernelParams::laplace(3)), out.solve.solution, ha) <= p.solver.tol);
  CHECK(out.inequalities.ineq2_pass);
  CHECK(out.inequalities.ineq3_pass);
}

TEST_CASE("zero applied field gives zero magnetization") {
  const auto d = GridDomain::unit_ball(3, 6);
  for (const auto& spec : {linear(2.0), saturating()}) {
    MagnetoProblem p(d, spec, Field(d));
    const auto out = solve_magnetization(p);
    CHECK(out.solve.converged);
    CHECK(out.solve.iterations == 0);
    CHECK(l2_norm(out.solve.solution) == 0.0);
  }
}

TEST_CASE("inequalities on arbitrary fields follow from positivity and the norm bound") {
  const auto d = GridDomain::unit_ball(3, 8);
  const OperatorContext ctx(d, KernelParams::laplace(3));
  const auto z = verify_inequalities(Field(d), ctx);
  CHECK(z.hi_dot_m == 0.0);
  CHECK(z.ineq2_pass);
  CHECK(z.ineq3_pass);

  const auto dense = assemble_dense(ctx);
  std::mt19937_64 rng(52);
  const auto vb = vector_blades(3);
  for (int i = 0; i < 10; ++i) {
    const auto M = random_field(d, vb, false, rng);
    const auto r = verify_inequalities(M, ctx);
    CHECK(r.ineq2_pass);
    CHECK(r.ineq3_pass);
    // oracle: (H_i, M) = -(BM, M) with B from the dense matrix
    const Eigen::VectorXcd x = to_coordinates(M, dense.blades);
    const double bmm = x.dot(dense.matrix * x).real() * d->voxel_volume();
    CHECK(r.hi_dot_m == doctest::Approx(-bmm).epsilon(1e-10));
    CHECK(r.m_norm_sq == doctest::Approx(l2_inner(M, M)));
  }
  const auto j = to_json(verify_inequalities(smooth_m(d), ctx));
  for (const char* k : {"hi_dot_m", "m_norm_sq", "ineq2_pass", "ineq3_pass"}) CHECK(j.contains(k));
}

TEST_CASE("applied field helpers") {
  const auto d = GridDomain::unit_ball(3, 6);
  // on the dipole axis the field is 2m / (4 pi r^3)
  const std::vector<double> pos{0, 0, -2.0};
  const auto on_axis = dipole_field(GridDomain::make({{-0.5, 0.5}, {-0.5, 0.5}, {-0.5, 0.5}}, 3, ShapeSpec::full_box()),
                                    {0, 0, 1}, pos);
  // voxel 13 is the box centre (0, 0, 0), two units above the dipole
  CHECK(on_axis.values(13)[4].real() == doctest::Approx(2.0 / (4 * kPi * 8.0)));
  CHECK(std::abs(on_axis.values(13)[1]) < 1e-15);
  CHECK_THROWS_AS(constant_vector_field(d, {1, 0}), DimensionMismatch);
  CHECK_THROWS_AS(dipole_field(d, {0, 0, 1}, {0, 0}), DimensionMismatch);
}
