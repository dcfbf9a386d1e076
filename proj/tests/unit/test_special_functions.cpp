#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cliffop/special_functions.hpp"

using namespace cliffop;

namespace {

struct Ref {
  double p, t, value;
};

// mpmath besselk at 30 digits
const Ref kReference[] = {
    {0.5, 1, 0.46106850444789456},
    {1.5, 2, 0.17990665795209217},
    {0, 0.1, 2.4270690247020166},
    {1, 0.5, 1.6564411200033009},
    {0.3, 1.7, 0.16907305227213439},
    {1, 5, 0.0040446134454521642},
    {2, 10, 2.1509817006932769e-5},
    {2.5, 0.01, 375987.97477979481},
    {1.5, 30, 2.2126121514878784e-14},
    {0, 2.5, 0.062347553200366186},
    {0.75, 3.0, 0.037696423405926791},
    {3, 0.2, 995.02455829787767},
};

}  // namespace

TEST_CASE("bessel_k against reference values") {
  for (const auto& r : kReference) {
    CAPTURE(r.p);
    CAPTURE(r.t);
    CHECK(bessel_k(r.p, r.t) == doctest::Approx(r.value).epsilon(1e-12));
    CHECK(bessel_k_general(r.p, r.t) == doctest::Approx(r.value).epsilon(1e-10));
  }
}

TEST_CASE("half-integer closed forms") {
  const double pi = std::numbers::pi;
  CHECK(bessel_k_half_integer(0, 1.0) == doctest::Approx(std::sqrt(pi / 2) * std::exp(-1.0)).epsilon(1e-15));
  CHECK(bessel_k_half_integer(1, 2.0) ==
        doctest::Approx(std::sqrt(pi / 4) * std::exp(-2.0) * 1.5).epsilon(1e-15));
  CHECK(is_half_integer(2.5));
  CHECK_FALSE(is_half_integer(2.0));
  CHECK_FALSE(is_half_integer(0.3));
}

TEST_CASE("large argument ratio approaches one monotonically") {
  const double pi = std::numbers::pi;
  double prev = 0.0;
  for (double t : {5.0, 10.0, 20.0, 40.0, 80.0}) {
    const double ratio = bessel_k(1.0, t) / (std::sqrt(pi / (2 * t)) * std::exp(-t));
    CHECK(ratio > 1.0);
    if (prev > 0.0) CHECK(ratio < prev);
    prev = ratio;
  }
  CHECK(prev - 1.0 < 0.01);
}

TEST_CASE("recursion residual") {
  CHECK(bessel_k_recursion_residual(0.5, 1.0) <= 1e-6);
  CHECK(bessel_k_recursion_residual(1.0, 2.0) <= 1e-6);
  // central differences: residual shrinks roughly fourfold per halving of the step
  const double r1 = bessel_k_recursion_residual(1.0, 2.0, 4e-3);
  const double r2 = bessel_k_recursion_residual(1.0, 2.0, 2e-3);
  CHECK(r2 < r1);
  CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(bessel_k(1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(bessel_k(1.0, -1.0), std::domain_error);
}

TEST_CASE("gamma") {
  const double pi = std::numbers::pi;
  CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(pi)).epsilon(1e-15));
  CHECK(gamma_fn(1.5) == doctest::Approx(std::sqrt(pi) / 2).epsilon(1e-15));
  CHECK(gamma_fn(4.2) == doctest::Approx(7.7566895357931794).epsilon(1e-13));
  CHECK(gamma_fn(0.1) == doctest::Approx(9.5135076986687313).epsilon(1e-13));
}
