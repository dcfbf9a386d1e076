#pragma once

// Self-check suites behind the `verify` and `kernels` commands.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "cliffop/kernels.hpp"

namespace cliffop {

struct SuiteCheck {
  std::string name;
  double value = 0.0;  // measured error or statistic
  double limit = 0.0;
  bool pass = false;
};

struct SuiteResult {
  std::string suite;
  std::vector<SuiteCheck> checks;
  bool pass() const;
};

nlohmann::json to_json(const SuiteResult& r);

/// Blade relations and associativity over all basis triples for n <= 4,
/// then involution and norm identities on random complexified elements.
SuiteResult algebra_suite(int random_samples = 1000, std::uint64_t seed = 5);

/// Recursion residuals on {1/2, 1, 3/2, 2} x {0.1, 0.5, 1, 2, 5, 10} and the
/// half-integer closed forms against the general-order path.
SuiteResult bessel_suite();

/// Small-argument constant and decay of the kernel split e_{ia} - e.
SuiteResult kernel_suite();

/// Least-squares slope of log(|x|^{n-1} |e_{ia}(x) - e(x)|) against log|x|
/// for |x| log-spaced in [r_min, r_max] along `direction`.
double split_decay_exponent(const KernelParams& params, std::span<const double> direction,
                            double r_min = 1e-3, double r_max = 1e-1, int points = 9);

struct KernelTableRow {
  double r = 0.0;
  double scaled_split = 0.0;    // |x|^{n-1} |e_{ia} - e|
  double small_arg_const = 0.0; // (2 pi)^{-n/2} (a0 r)^{n/2} K_{n/2}(a0 r)
  double inv_sigma = 0.0;
};

std::vector<KernelTableRow> kernel_asymptotics_table(const KernelParams& params, double r_min,
                                                     double r_max, int points);

}  // namespace cliffop
