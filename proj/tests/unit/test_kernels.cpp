#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cliffop/kernels.hpp"

using namespace cliffop;

namespace {

const double kPi = std::numbers::pi;

Multivector gen(int n, int j) { return Multivector::blade(n, Blade{1} << j); }

// Left D_{ia} u = sum_j e_j d_j u + i a u by central differences.
Multivector fd_disturbed_dirac(const KernelParams& p, std::vector<double> x, double h) {
  const int n = p.n;
  Multivector out(n);
  for (int j = 0; j < n; ++j) {
    auto xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    const auto d = (disturbed_kernel(xp, p) - disturbed_kernel(xm, p)) * Complex(1.0 / (2 * h));
    out += gen(n, j) * d;
  }
  out += (p.a.to_multivector() * Complex(0, 1)) * disturbed_kernel(x, p);
  return out;
}

}  // namespace

TEST_CASE("sphere areas") {
  CHECK(sphere_area(2) == doctest::Approx(2 * kPi).epsilon(1e-14));
  CHECK(sphere_area(3) == doctest::Approx(4 * kPi).epsilon(1e-12));
  CHECK(sphere_area(4) == doctest::Approx(2 * kPi * kPi).epsilon(1e-14));
}

TEST_CASE("cauchy kernel") {
  const std::vector<double> x{1, 0, 0};
  const auto e = cauchy_kernel(x);
  CHECK(e[1].real() == doctest::Approx(-1.0 / (4 * kPi)).epsilon(1e-14));
  CHECK(e[2] == Complex(0.0));
  CHECK(is_vector(e));

  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int n = 2; n <= 4; ++n) {
    std::vector<double> y(n), ym(n), y2(n);
    for (int k = 0; k < n; ++k) {
      y[k] = g(rng);
      ym[k] = -y[k];
      y2[k] = 2 * y[k];
    }
    CHECK(max_abs_diff(cauchy_kernel(ym), -cauchy_kernel(y)) == 0.0);
    CHECK(norm(cauchy_kernel(y2)) == doctest::Approx(std::pow(2.0, 1 - n) * norm(cauchy_kernel(y))));
  }
  CHECK_THROWS_AS(cauchy_kernel(std::vector<double>{0, 0, 0}), SingularEvaluation);
}

TEST_CASE("cauchy kernel is left monogenic away from the origin") {
  for (int n = 2; n <= 4; ++n) {
    std::vector<double> x(n, 0.4);
    x[0] = -0.7;
    const double h = 1e-3 * std::sqrt(0.16 * (n - 1) + 0.49);
    Multivector d(n);
    for (int j = 0; j < n; ++j) {
      auto xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      d += gen(n, j) * ((cauchy_kernel(xp) - cauchy_kernel(xm)) * Complex(1.0 / (2 * h)));
    }
    CHECK(norm(d) <= 1e-4);
  }
}

TEST_CASE("yukawa kernel values") {
  CHECK(yukawa_kernel(std::vector<double>{1, 0, 0}, 1.0) ==
        doctest::Approx(std::exp(-1.0) / (4 * kPi)).epsilon(1e-14));
  // mpmath references
  CHECK(yukawa_kernel(std::vector<double>{0.0, 0.7, 0.0}, 2.0) == doctest::Approx(0.028033661259114675).epsilon(1e-13));
  CHECK(yukawa_kernel(std::vector<double>{0.3, 0.0}, 1.0) == doctest::Approx(0.21843380283182688).epsilon(1e-13));
  CHECK(yukawa_kernel(std::vector<double>{0.0, 0.0, 0.8, 0.0}, 1.5) ==
        doctest::Approx(0.020640663498855647).epsilon(1e-13));
  // a0 = 0 falls back to the Laplace fundamental solution
  CHECK(yukawa_kernel(std::vector<double>{2, 0, 0}, 0.0) == doctest::Approx(1.0 / (8 * kPi)));
}

TEST_CASE("yukawa kernel is radial and solves (-Laplace + a0^2) K = 0 away from 0") {
  const double a0 = 1.3;
  const std::vector<double> x{0.6, 0.0, 0.8};
  const double c = std::cos(0.7), s = std::sin(0.7);
  const std::vector<double> rx{c * x[0] - s * x[1], s * x[0] + c * x[1], x[2]};
  CHECK(yukawa_kernel(rx, a0) == doctest::Approx(yukawa_kernel(x, a0)).epsilon(1e-14));

  for (int n = 2; n <= 4; ++n) {
    std::vector<double> y(n, 0.0);
    y[0] = 1.0;
    const double h = 1e-3;
    double lap = 0.0;
    for (int j = 0; j < n; ++j) {
      auto yp = y, ym = y;
      yp[j] += h;
      ym[j] -= h;
      lap += (yukawa_kernel(yp, a0) - 2 * yukawa_kernel(y, a0) + yukawa_kernel(ym, a0)) / (h * h);
    }
    CHECK(std::abs(-lap + a0 * a0 * yukawa_kernel(y, a0)) <= 1e-4);
  }
}

TEST_CASE("disturbed kernel reduces to the cauchy kernel for a = 0") {
  const std::vector<double> x{0.3, -0.2, 0.9};
  CHECK(max_abs_diff(disturbed_kernel(x, KernelParams::laplace(3)), cauchy_kernel(x)) == 0.0);
}

TEST_CASE("disturbed kernel closed forms") {
  // a0 = 1, x = e1: K_{1/2}(1) = sqrt(pi/2)/e, K_{3/2}(1) = 2 sqrt(pi/2)/e, so
  // e_ia = -(2 e1 + i)/(4 pi e)
  const KernelParams p(3, Paravector(1.0, {0, 0, 0}));
  const auto k = disturbed_kernel(std::vector<double>{1, 0, 0}, p);
  const double s = std::exp(-1.0) / (4 * kPi);
  CHECK(k[0].real() == doctest::Approx(0.0));
  CHECK(k[0].imag() == doctest::Approx(-s).epsilon(1e-14));
  CHECK(k[1].real() == doctest::Approx(-2 * s).epsilon(1e-14));
  CHECK(std::abs(k[2]) + std::abs(k[4]) == 0.0);

  // with a vector part: mpmath evaluation of the explicit formula
  const KernelParams q(3, Paravector(1.0, {0.5, -0.25, 0.0}));
  const auto m = disturbed_kernel(std::vector<double>{0.3, -0.4, 0.5}, q);
  CHECK(m[0].real() == doctest::Approx(-0.013728377287180352).epsilon(1e-13));
  CHECK(m[0].imag() == doctest::Approx(-0.053764682358195336).epsilon(1e-13));
  CHECK(m[1].real() == doctest::Approx(-0.055069232305209598).epsilon(1e-13));
  CHECK(m[1].imag() == doctest::Approx(0.014061483576979775).epsilon(1e-13));
  CHECK(m[2].real() == doctest::Approx(0.073425643073612797).epsilon(1e-13));
  CHECK(m[2].imag() == doctest::Approx(-0.018748644769306366).epsilon(1e-13));
  CHECK(m[4].real() == doctest::Approx(-0.091782053842015997).epsilon(1e-13));
  CHECK(m[4].imag() == doctest::Approx(0.023435805961632958).epsilon(1e-13));
  for (Blade b : {3u, 5u, 6u, 7u}) CHECK(m[b] == Complex(0.0));
}

TEST_CASE("a0 = 0 with a vector part is a pure phase times the cauchy kernel") {
  const KernelParams p(3, Paravector(0.0, {0.4, 0.1, -0.3}));
  const std::vector<double> x{0.2, 0.5, -0.1};
  const double dot = 0.4 * 0.2 + 0.1 * 0.5 + 0.3 * 0.1;
  const auto expect = cauchy_kernel(x) * std::exp(Complex(0, -dot));
  CHECK(max_abs_diff(disturbed_kernel(x, p), expect) < 1e-15);
}

TEST_CASE("disturbed kernel near the origin is bounded by C |x|^{1-n}") {
  const KernelParams p(3, Paravector(1.0, {0.5, 0.2, 0.0}));
  for (double r : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const std::vector<double> x{r * 0.6, 0.0, r * 0.8};
    CHECK(norm(disturbed_kernel(x, p)) * r * r <= 0.1);
  }
}

TEST_CASE("analytic derivative matches finite differences") {
  const KernelParams p(3, Paravector(0.8, {0.3, -0.6, 0.2}));
  const std::vector<double> x{0.4, 0.3, -0.5};
  const double h = 1e-5;
  for (int k = 0; k < 3; ++k) {
    auto xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    const auto fd = (disturbed_kernel(xp, p) - disturbed_kernel(xm, p)) * Complex(1.0 / (2 * h));
    CHECK(max_abs_diff(fd, disturbed_kernel_derivative(x, p, k)) < 1e-8);
  }
}

TEST_CASE("disturbed kernel is annihilated by D_ia, second order in the step") {
  for (int n = 2; n <= 4; ++n) {
    std::vector<double> vec(n, 0.0);
    vec[0] = 0.5;
    vec[n - 1] = -0.3;
    const KernelParams p(n, Paravector(1.0, vec));
    std::vector<double> x(n, 0.3);
    x[0] = 0.6;
    const double r1 = norm(fd_disturbed_dirac(p, x, 2e-3));
    const double r2 = norm(fd_disturbed_dirac(p, x, 1e-3));
    CAPTURE(n);
    CHECK(r1 < 1e-4);
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.1));

    // exact version from the analytic derivatives
    Multivector d = (p.a.to_multivector() * Complex(0, 1)) * disturbed_kernel(x, p);
    for (int j = 0; j < n; ++j) d += gen(n, j) * disturbed_kernel_derivative(x, p, j);
    CHECK(norm(d) < 1e-12 * norm(disturbed_kernel(x, p)) / 0.6 + 1e-14);
  }
}

TEST_CASE("split difference") {
  const std::vector<double> x{0.1, 0.2, 0.3};
  CHECK(kernel_split_difference(x, KernelParams::laplace(3)).is_zero());

  const KernelParams p(3, Paravector(1.0, {0.5, 0.0, 0.0}));
  double prev = std::numeric_limits<double>::infinity();
  std::vector<double> prev_comp(4, std::numeric_limits<double>::infinity());
  for (double r : {1e-1, 1e-2, 1e-3}) {
    const std::vector<double> y{r * 0.48, -r * 0.6, r * 0.64};
    const auto s = kernel_split_difference(y, p);
    const double scaled = r * r * norm(s);
    CHECK(scaled < prev);
    prev = scaled;
    for (Blade b : {0u, 1u, 2u, 4u}) {
      const double c = r * r * std::abs(s[b]);
      const std::size_t slot = b == 0 ? 0 : (b == 1 ? 1 : (b == 2 ? 2 : 3));
      CHECK(c < prev_comp[slot]);
      prev_comp[slot] = c;
    }
  }
}

TEST_CASE("small argument constant") {
  const KernelParams p3(3, Paravector(1.0, {0, 0, 0}));
  CHECK(std::abs(small_argument_constant(1e-4, p3) * 4 * kPi - 1.0) < 0.01);
  const KernelParams p2(2, Paravector(1.0, {0, 0}));
  CHECK(std::abs(small_argument_constant(1e-5, p2) * 2 * kPi - 1.0) < 0.02);
  for (int n = 2; n <= 4; ++n) {
    const KernelParams p(n, Paravector(1.0, std::vector<double>(n, 0.0)));
    const double limit = std::tgamma(0.5 * n) / (2 * std::pow(kPi, 0.5 * n));
    CHECK(limit == doctest::Approx(1.0 / sphere_area(n)).epsilon(1e-14));
    CHECK(small_argument_constant(1e-7, p) == doctest::Approx(limit).epsilon(n == 2 ? 1e-2 : 1e-4));
  }
  CHECK_THROWS(small_argument_constant(1e-3, KernelParams::laplace(3)));
}

TEST_CASE("cell averages of the yukawa kernel") {
  const double pi = kPi;
  {
    const double V = 0.008, R = std::cbrt(3 * V / (4 * pi));
    CHECK(yukawa_ball_average(3, 0.0, V) == doctest::Approx(R * R / (2 * V)).epsilon(1e-14));
  }
  {
    const double V = 0.01, R = std::sqrt(V / pi);
    const double expect = (R * R / 4 - R * R / 2 * std::log(R)) / V;
    CHECK(yukawa_ball_average(2, 0.0, V) == doctest::Approx(expect).epsilon(1e-10));
  }
  {
    const double V = 0.01, R = std::pow(2 * V / (pi * pi), 0.25);
    CHECK(yukawa_ball_average(4, 0.0, V) == doctest::Approx(R * R / (4 * V)).epsilon(1e-10));
  }
  // mpmath quadrature of the Bessel form
  CHECK(yukawa_ball_average(4, 1.5, 0.01) == doctest::Approx(1.0674470758286934).epsilon(1e-9));
  CHECK(yukawa_ball_average(2, 2.0, 0.01) == doctest::Approx(0.44617243911325625).epsilon(1e-9));
}
