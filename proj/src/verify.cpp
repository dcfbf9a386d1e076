#include "cliffop/verify.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "cliffop/clifford.hpp"
#include "cliffop/special_functions.hpp"

namespace cliffop {

bool SuiteResult::pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

nlohmann::json to_json(const SuiteResult& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name}, {"value", c.value}, {"limit", c.limit}, {"pass", c.pass}});
  }
  return {{"suite", r.suite}, {"pass", r.pass()}, {"checks", checks}};
}

namespace {

void add(SuiteResult& r, std::string name, double value, double limit) {
  r.checks.push_back({std::move(name), value, limit, value <= limit});
}

Multivector random_mv(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Multivector m(n);
  for (auto& c : m.coeffs()) {
    const double re = g(rng);
    c = Complex(re, g(rng));
  }
  return m;
}

// Product of generators in the listed order, multiplied out one at a time.
Multivector generator_product(int n, const std::vector<int>& gens) {
  Multivector m = Multivector::scalar(n, 1.0);
  for (int j : gens) m = m * Multivector::blade(n, Blade{1} << j);
  return m;
}

}  // namespace

SuiteResult algebra_suite(int random_samples, std::uint64_t seed) {
  SuiteResult r{"algebra", {}};
  double gen_err = 0.0, blade_err = 0.0, assoc_err = 0.0;
  for (int n = 1; n <= 4; ++n) {
    const Blade count = Blade{1} << n;
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const Multivector ej = Multivector::blade(n, Blade{1} << j);
        const Multivector ek = Multivector::blade(n, Blade{1} << k);
        const Multivector expect = j == k ? Multivector::scalar(n, -1.0) : -(ek * ej);
        gen_err = std::max(gen_err, max_abs_diff(ej * ek, expect));
      }
    }
    for (Blade b = 0; b < count; ++b) {
      std::vector<int> gens;
      for (int j = 0; j < n; ++j) {
        if (b & (Blade{1} << j)) gens.push_back(j);
      }
      blade_err = std::max(blade_err, max_abs_diff(generator_product(n, gens), Multivector::blade(n, b)));
    }
    for (Blade a = 0; a < count; ++a) {
      for (Blade b = 0; b < count; ++b) {
        for (Blade c = 0; c < count; ++c) {
          const Multivector A = Multivector::blade(n, a), B = Multivector::blade(n, b),
                            C = Multivector::blade(n, c);
          assoc_err = std::max(assoc_err, max_abs_diff((A * B) * C, A * (B * C)));
        }
      }
    }
  }
  add(r, "generator relations e_j e_k + e_k e_j = -2 delta_jk", gen_err, 1e-12);
  add(r, "blades are ordered generator products", blade_err, 1e-12);
  add(r, "associativity on all basis triples, n <= 4", assoc_err, 1e-12);

  std::mt19937_64 rng(seed);
  double bar_err = 0.0, tilde_err = 0.0, para_err = 0.0, sp_err = 0.0, sym_err = 0.0;
  for (int s = 0; s < random_samples; ++s) {
    const int n = 1 + s % 4;
    const Multivector a = random_mv(n, rng), b = random_mv(n, rng);
    const double scale = norm(a) * norm(b);
    bar_err = std::max(bar_err, max_abs_diff(main_involution(a * b),
                                             main_involution(b) * main_involution(a)) / scale);
    tilde_err = std::max(tilde_err, max_abs_diff(tilde_involution(a * b),
                                                 tilde_involution(b) * tilde_involution(a)) / scale);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> vec(n);
    for (double& v : vec) v = g(rng);
    const Paravector p(g(rng), vec);
    const Multivector pm = p.to_multivector();
    para_err = std::max(para_err, max_abs_diff(main_involution(pm) * pm,
                                               Multivector::scalar(n, p.norm_squared())) /
                                      p.norm_squared());
    sp_err = std::max(sp_err, std::abs(scalar_product(a, a) - norm_squared(a)) / norm_squared(a));
    sym_err = std::max(sym_err, std::abs(scalar_product(a, b) - scalar_product(b, a)) / scale);
  }
  add(r, "bar(ab) = bar(b) bar(a)", bar_err, 1e-12);
  add(r, "tilde(ab) = tilde(b) tilde(a)", tilde_err, 1e-12);
  add(r, "bar(a) a = |a|^2 for real paravectors", para_err, 1e-12);
  add(r, "[c,c] = |c|^2", sp_err, 1e-12);
  add(r, "[u,v] = [v,u]", sym_err, 1e-12);
  return r;
}

SuiteResult bessel_suite() {
  SuiteResult r{"bessel", {}};
  double worst = 0.0;
  for (double p : {0.5, 1.0, 1.5, 2.0}) {
    for (double t : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
      worst = std::max(worst, bessel_k_recursion_residual(p, t));
    }
  }
  add(r, "recursion residual on the (p,t) grid", worst, 1e-6);
  double closed = 0.0;
  for (int m = 0; m <= 5; ++m) {
    for (double t : {1e-3, 0.1, 0.7, 1.9, 2.1, 5.0, 20.0, 50.0}) {
      const double a = bessel_k_half_integer(m, t);
      const double b = bessel_k_general(m + 0.5, t);
      closed = std::max(closed, std::abs(a - b) / a);
    }
  }
  add(r, "half-integer closed form vs general path (relative)", closed, 1e-10);
  return r;
}

double split_decay_exponent(const KernelParams& params, std::span<const double> direction,
                            double r_min, double r_max, int points) {
  const int n = params.n;
  double dn = 0.0;
  for (double d : direction) dn += d * d;
  dn = std::sqrt(dn);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::vector<double> x(n);
  for (int i = 0; i < points; ++i) {
    const double r = r_min * std::pow(r_max / r_min, points > 1 ? double(i) / (points - 1) : 0.0);
    for (int k = 0; k < n; ++k) x[k] = r * direction[k] / dn;
    const double y = std::log(std::pow(r, n - 1) * norm(kernel_split_difference(x, params)));
    const double lx = std::log(r);
    sx += lx;
    sy += y;
    sxx += lx * lx;
    sxy += lx * y;
  }
  return (points * sxy - sx * sy) / (points * sxx - sx * sx);
}

std::vector<KernelTableRow> kernel_asymptotics_table(const KernelParams& params, double r_min,
                                                     double r_max, int points) {
  const int n = params.n;
  std::vector<KernelTableRow> rows;
  std::vector<double> x(n, 0.0);
  for (int i = 0; i < points; ++i) {
    const double r = r_min * std::pow(r_max / r_min, points > 1 ? double(i) / (points - 1) : 0.0);
    for (int k = 0; k < n; ++k) x[k] = r / std::sqrt(double(n));
    KernelTableRow row;
    row.r = r;
    row.scaled_split = std::pow(r, n - 1) * norm(kernel_split_difference(x, params));
    row.small_arg_const = params.a0() > 0.0 ? small_argument_constant(r, params) : 0.0;
    row.inv_sigma = 1.0 / sphere_area(n);
    rows.push_back(row);
  }
  return rows;
}

SuiteResult kernel_suite() {
  SuiteResult r{"kernels", {}};
  const KernelParams p3(3, Paravector(1.0, {0.5, 0.0, 0.0}));
  const double c = small_argument_constant(1e-4, p3);
  add(r, "n=3 small-argument constant vs 1/sigma_3 (relative)", std::abs(c * sphere_area(3) - 1.0), 0.01);
  const KernelParams p2(2, Paravector(1.0, {0.0, 0.0}));
  add(r, "n=2 small-argument constant vs 1/sigma_2 (relative)",
      std::abs(small_argument_constant(1e-5, p2) * sphere_area(2) - 1.0), 0.02);
  const std::vector<double> dir{1.0, -0.6, 0.3};
  const double tau = split_decay_exponent(p3, dir);
  // the check passes when the exponent is strictly positive
  r.checks.push_back({"decay exponent of |x|^{n-1}|e_ia - e| on [1e-3, 1e-1]", tau, 0.0, tau > 0.0});
  return r;
}

}  // namespace cliffop
