#include <doctest.h>

#include "cliffop/verify.hpp"

using namespace cliffop;

TEST_CASE("self-check suites pass") {
  for (const auto& s : {algebra_suite(), bessel_suite(), kernel_suite()}) {
    CAPTURE(s.suite);
    for (const auto& c : s.checks) {
      CAPTURE(c.name);
      CHECK(c.pass);
    }
    CHECK(s.pass());
    const auto j = to_json(s);
    CHECK(j["pass"] == true);
    CHECK(j["checks"].size() == s.checks.size());
  }
}

TEST_CASE("algebra suite tolerances are tight") {
  const auto s = algebra_suite(200, 3);
  for (const auto& c : s.checks) {
    CAPTURE(c.name);
    CHECK(c.limit == 1e-12);
    CHECK(c.value <= 1e-12);
  }
}

TEST_CASE("decay exponent of the split difference") {
  const KernelParams p(3, Paravector(1.0, {0.5, 0.0, 0.0}));
  const std::vector<double> dir{1.0, -0.6, 0.3};
  CHECK(split_decay_exponent(p, dir) > 0.0);
  // n = 2 and n = 4 as well
  CHECK(split_decay_exponent(KernelParams(2, Paravector(1.0, {0.3, 0.0})), std::vector<double>{1.0, 1.0}) > 0.0);
  CHECK(split_decay_exponent(KernelParams(4, Paravector(1.0, {0.0, 0.2, 0.0, 0.0})),
                             std::vector<double>{1.0, 0.0, -1.0, 0.5}) > 0.0);
}

TEST_CASE("kernel table") {
  const KernelParams p(3, Paravector(1.0, {0.5, 0.0, 0.0}));
  const auto rows = kernel_asymptotics_table(p, 1e-4, 1e-1, 7);
  REQUIRE(rows.size() == 7);
  CHECK(rows.front().r == doctest::Approx(1e-4));
  CHECK(rows.back().r == doctest::Approx(1e-1));
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].scaled_split > rows[i - 1].scaled_split);
  CHECK(std::abs(rows.front().small_arg_const / rows.front().inv_sigma - 1.0) < 0.01);
}
