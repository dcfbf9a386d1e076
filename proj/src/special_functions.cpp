#include "cliffop/special_functions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cliffop {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = 1e-16;

// Taylor coefficients of 1/Gamma(z) = sum_k c_k z^k, k = 1..26.
constexpr std::array<double, 27> kRecipGamma = {
    0.0,
    1.0,
    0.57721566490153286061,
    -0.65587807152025388108,
    -0.042002635034095235529,
    0.1665386113822914895,
    -0.042197734555544336748,
    -0.0096219715278769735621,
    0.0072189432466630995424,
    -0.0011651675918590651121,
    -0.00021524167411495097282,
    0.00012805028238811618615,
    -0.000020134854780788238656,
    -1.2504934821426706573e-6,
    1.1330272319816958824e-6,
    -2.0563384169776071035e-7,
    6.1160951044814158179e-9,
    5.0020076444692229301e-9,
    -1.1812745704870201446e-9,
    1.0434267116911005105e-10,
    7.782263439905071254e-12,
    -3.6968056186422057082e-12,
    5.100370287454475979e-13,
    -2.0583260535665067832e-14,
    -5.3481225394230179824e-15,
    1.2267786282382607902e-15,
    -1.1812593016974587695e-16,
};

// Temme's auxiliary functions for |mu| <= 1/2:
//   gam1 = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu)
//   gam2 = (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2
// With 1/Gamma(1+z) = sum_k c_k z^{k-1} the odd powers cancel in gam1 and the
// even ones in gam2, so no division by mu is needed.
struct TemmeGammas {
  double gam1, gam2, gampl, gammi;  // gampl = 1/Gamma(1+mu), gammi = 1/Gamma(1-mu)
};

TemmeGammas temme_gammas(double mu) {
  double gam1 = 0.0;
  double gam2 = 0.0;
  double p = 1.0;  // mu^{k-1} for odd k, mu^{k-2} for even k
  for (std::size_t k = 1; k < kRecipGamma.size(); k += 2) {
    gam2 += kRecipGamma[k] * p;
    if (k + 1 < kRecipGamma.size()) gam1 -= kRecipGamma[k + 1] * p;
    p *= mu * mu;
  }
  return {gam1, gam2, gam2 - mu * gam1, gam2 + mu * gam1};
}

struct KPair {
  double k_mu;
  double k_mu1;
};

// Series about t = 0 for K_mu and K_{mu+1}, |mu| <= 1/2, 0 < t <= 2.
KPair temme_series(double mu, double t) {
  const double half_t = 0.5 * t;
  const double pimu = kPi * mu;
  const double fact = std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
  const double d = -std::log(half_t);
  const double e = mu * d;
  const double fact2 = std::abs(e) < kEps ? 1.0 : std::sinh(e) / e;
  const TemmeGammas g = temme_gammas(mu);

  double ff = fact * (g.gam1 * std::cosh(e) + g.gam2 * fact2 * d);
  double sum = ff;
  const double ee = std::exp(e);
  double p = 0.5 * ee / g.gampl;
  double q = 0.5 / (ee * g.gammi);
  double c = 1.0;
  const double d2 = half_t * half_t;
  double sum1 = p;
  for (int i = 1; i < 500; ++i) {
    const double fi = i;
    ff = (fi * ff + p + q) / (fi * fi - mu * mu);
    c *= d2 / fi;
    p /= fi - mu;
    q /= fi + mu;
    const double del = c * ff;
    sum += del;
    const double del1 = c * (p - fi * ff);
    sum1 += del1;
    if (std::abs(del) < std::abs(sum) * kEps) break;
  }
  return {sum, sum1 * 2.0 / t};
}

// Steed's continued fraction (Temme's normalization) for t > 2.
KPair steed_cf2(double mu, double t) {
  double b = 2.0 * (1.0 + t);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25 - mu * mu;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 1; i < 10000; ++i) {
    const double fi = i;
    a -= 2.0 * fi;
    c = -a * c / (fi + 1.0);
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) break;
  }
  h *= a1;
  const double k_mu = std::sqrt(kPi / (2.0 * t)) * std::exp(-t) / s;
  const double k_mu1 = k_mu * (mu + t + 0.5 - h) / t;
  return {k_mu, k_mu1};
}

void check_args(double p, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw std::domain_error("bessel_k: argument must be positive and finite, got " +
                            std::to_string(t));
  }
  if (!(p >= 0.0) || !std::isfinite(p)) {
    throw std::domain_error("bessel_k: order must be finite and nonnegative, got " +
                            std::to_string(p));
  }
}

double check_overflow(double value, double p, double t) {
  if (!std::isfinite(value)) {
    throw std::overflow_error("bessel_k: K_" + std::to_string(p) + "(" + std::to_string(t) +
                              ") exceeds double range");
  }
  return value;
}

}  // namespace

bool is_half_integer(double p) {
  const double twice = 2.0 * p;
  const double r = std::round(twice);
  return std::abs(twice - r) < 2e-14 && static_cast<long long>(r) % 2 != 0;
}

double bessel_k_half_integer(int m, double t) {
  check_args(m + 0.5, t);
  if (m < 0) throw std::domain_error("bessel_k_half_integer: m must be >= 0");
  // Terms (m+k)!/(k!(m-k)!) (2t)^{-k}, built by ratio from k to k+1.
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < m; ++k) {
    term *= static_cast<double>((m + k + 1) * (m - k)) / ((k + 1) * 2.0 * t);
    sum += term;
  }
  return check_overflow(std::sqrt(kPi / (2.0 * t)) * std::exp(-t) * sum, m + 0.5, t);
}

double bessel_k_general(double p, double t) {
  check_args(p, t);
  const int nl = static_cast<int>(p + 0.5);
  const double mu = p - nl;  // in [-1/2, 1/2)
  const KPair base = t <= 2.0 ? temme_series(mu, t) : steed_cf2(mu, t);
  double k_prev = base.k_mu;
  double k_cur = base.k_mu1;
  if (nl == 0) return check_overflow(k_prev, p, t);
  // K_{nu+1} = (2 nu / t) K_nu + K_{nu-1}, stable upward.
  for (int i = 1; i < nl; ++i) {
    const double nu = mu + i;
    const double k_next = 2.0 * nu / t * k_cur + k_prev;
    k_prev = k_cur;
    k_cur = k_next;
    if (!std::isfinite(k_cur)) break;
  }
  return check_overflow(k_cur, p, t);
}

double bessel_k(double p, double t) {
  check_args(p, t);
  if (is_half_integer(p)) return bessel_k_half_integer(static_cast<int>(std::floor(p)), t);
  return bessel_k_general(p, t);
}

double bessel_k_recursion_residual(double p, double t, double rel_step) {
  check_args(p, t);
  const double h = rel_step * t;
  if (!(h > 0.0) || h >= t) throw std::domain_error("recursion residual: step must be in (0, t)");
  auto g = [p](double s) { return std::pow(s, -p) * bessel_k(p, s); };
  const double derivative = (g(t + h) - g(t - h)) / (2.0 * h);
  const double rhs = -std::pow(t, -p) * bessel_k(p + 1.0, t);
  return std::abs(derivative - rhs) / std::abs(rhs);
}

double gamma_fn(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::domain_error("gamma_fn: argument must be positive, got " + std::to_string(x));
  }
  return std::tgamma(x);
}

}  // namespace cliffop
