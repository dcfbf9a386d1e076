#include "cliffop/kernels.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "cliffop/special_functions.hpp"

namespace cliffop {

namespace {

constexpr double kPi = std::numbers::pi;

void check_n(int n) {
  if (n < 2 || n > 4) {
    throw std::invalid_argument("kernels support n in {2,3,4}, got " + std::to_string(n));
  }
}

double radius_checked(std::span<const double> x) {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  const double r = std::sqrt(r2);
  if (r < kSingularGuard) {
    throw SingularEvaluation("kernel evaluated at the singular point x = 0");
  }
  return r;
}

Complex phase(std::span<const double> x, const Paravector& a) {
  double ax = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) ax += a.a[j] * x[j];
  return std::polar(1.0, -ax);
}

// Radial profiles of e_{ia} without the phase:
//   vector part   x_j * A(r),  A(r) = -(2pi)^{-n/2} r^{-n} (a0 r)^{n/2} K_{n/2}(a0 r)
//   scalar part   i * C(r),    C(r) = -(2pi)^{-n/2} a0 r^{2-n} (a0 r)^{n/2-1} K_{n/2-1}(a0 r)
// For a0 = 0 they reduce to the Cauchy kernel: A = -1/(sigma_n r^n), C = 0.
struct Profile {
  double A, C, dA, dC;  // dA, dC are d/dr
};

Profile profile(int n, double r, double a0) {
  const double half = 0.5 * n;
  if (a0 == 0.0) {
    const double s = sphere_area(n);
    return {-1.0 / (s * std::pow(r, n)), 0.0, n / (s * std::pow(r, n + 1)), 0.0};
  }
  const double norm = std::pow(2.0 * kPi, -half);
  const double t = a0 * r;
  const double k_half = bessel_k(half, t);
  const double k_half_m1 = bessel_k(half - 1.0, t);
  const double k_half_p1 = bessel_k(half + 1.0, t);
  // A(r) = -norm a0^n t^{-n/2} K_{n/2}(t); dA/dr = norm a0^{n+1} t^{-n/2} K_{n/2+1}(t).
  const double a0n = std::pow(a0, n);
  const double t_mh = std::pow(t, -half);
  const double A = -norm * a0n * t_mh * k_half;
  const double dA = norm * a0n * a0 * t_mh * k_half_p1;
  // C(r) = -norm a0^{n-1} t^{-q} K_q(t) with q = n/2 - 1, and by the same
  // recursion dC/dr = norm a0^n t^{-q} K_{q+1}(t).
  const double t_mq = std::pow(t, -(half - 1.0));
  const double C = -norm * std::pow(a0, n - 1) * t_mq * k_half_m1;
  const double dC = norm * a0n * t_mq * k_half;
  return {A, C, dA, dC};
}

}  // namespace

KernelParams::KernelParams(int dim, Paravector disturbance) : n(dim), a(std::move(disturbance)) {
  check_n(n);
  if (a.dim() != n) {
    throw DimensionMismatch("disturbance paravector must have n vector components");
  }
  if (!(a.a0 >= 0.0) || !std::isfinite(a.a0)) {
    throw std::invalid_argument("a0 must be finite and nonnegative");
  }
  for (double v : a.a) {
    if (!std::isfinite(v)) throw std::invalid_argument("disturbance components must be finite");
  }
}

bool KernelParams::has_vector_part() const {
  for (double v : a.a) {
    if (v != 0.0) return true;
  }
  return false;
}

double sphere_area(int n) {
  if (n < 1) throw std::invalid_argument("sphere_area: n must be positive");
  return 2.0 * std::pow(kPi, 0.5 * n) / gamma_fn(0.5 * n);
}

Multivector cauchy_kernel(std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  check_n(n);
  const double r = radius_checked(x);
  const double scale = -1.0 / (sphere_area(n) * std::pow(r, n));
  Multivector out(n);
  for (int j = 0; j < n; ++j) out[Blade{1} << j] = scale * x[j];
  return out;
}

double yukawa_radial(int n, double r, double a0) {
  check_n(n);
  if (r < kSingularGuard) throw SingularEvaluation("yukawa kernel at r = 0");
  if (a0 < 0.0) throw std::invalid_argument("a0 must be nonnegative");
  if (a0 == 0.0) {
    if (n == 2) return -std::log(r) / (2.0 * kPi);
    return 1.0 / ((n - 2) * sphere_area(n) * std::pow(r, n - 2));
  }
  const double half = 0.5 * n;
  return std::pow(2.0 * kPi, -half) * std::pow(a0 / r, half - 1.0) * bessel_k(half - 1.0, a0 * r);
}

double yukawa_kernel(std::span<const double> x, double a0) {
  const int n = static_cast<int>(x.size());
  check_n(n);
  return yukawa_radial(n, radius_checked(x), a0);
}

Multivector disturbed_kernel(std::span<const double> x, const KernelParams& params) {
  const int n = params.n;
  if (static_cast<int>(x.size()) != n) throw DimensionMismatch("point dimension != params.n");
  const double r = radius_checked(x);
  const Profile pr = profile(n, r, params.a0());
  const Complex ph = phase(x, params.a);
  Multivector out(n);
  out[0] = ph * Complex(0.0, pr.C);
  for (int j = 0; j < n; ++j) out[Blade{1} << j] = ph * (pr.A * x[j]);
  return out;
}

Multivector disturbed_kernel_derivative(std::span<const double> x, const KernelParams& params,
                                        int k) {
  const int n = params.n;
  if (static_cast<int>(x.size()) != n) throw DimensionMismatch("point dimension != params.n");
  if (k < 0 || k >= n) throw std::out_of_range("derivative direction out of range");
  const double r = radius_checked(x);
  const Profile pr = profile(n, r, params.a0());
  const Complex ph = phase(x, params.a);
  const Complex dph = Complex(0.0, -params.a.a[k]) * ph;
  const double dr = x[k] / r;
  Multivector out(n);
  out[0] = dph * Complex(0.0, pr.C) + ph * Complex(0.0, pr.dC * dr);
  for (int j = 0; j < n; ++j) {
    const double dvec = pr.dA * dr * x[j] + (j == k ? pr.A : 0.0);
    out[Blade{1} << j] = dph * (pr.A * x[j]) + ph * dvec;
  }
  return out;
}

Multivector kernel_split_difference(std::span<const double> x, const KernelParams& params) {
  return disturbed_kernel(x, params) - cauchy_kernel(x);
}

double small_argument_constant(double r, const KernelParams& params) {
  if (!(r > 0.0)) throw std::domain_error("small_argument_constant: r must be positive");
  const double a0 = params.a0();
  if (!(a0 > 0.0)) throw std::domain_error("small_argument_constant: a0 must be positive");
  const double half = 0.5 * params.n;
  const double t = a0 * r;
  return std::pow(2.0 * kPi, -half) * std::pow(t, half) * bessel_k(half, t);
}

double yukawa_ball_average(int n, double a0, double cell_volume) {
  check_n(n);
  if (!(cell_volume > 0.0)) throw std::invalid_argument("cell volume must be positive");
  const double s = sphere_area(n);
  const double radius = std::pow(n * cell_volume / s, 1.0 / n);
  double integral = 0.0;
  if (n == 3 && a0 == 0.0) {
    integral = 0.5 * radius * radius;  // int_0^R r dr
  } else if (n == 3) {
    // int_0^R e^{-a0 r} r dr
    const double t = a0 * radius;
    integral = (1.0 - std::exp(-t) * (1.0 + t)) / (a0 * a0);
  } else {
    // Radial integral s * int_0^R K(r) r^{n-1} dr with r = R u^2, which removes
    // the log/power behaviour at the origin; 64-point Gauss-Legendre on [0,1].
    static const auto nodes = [] {
      constexpr int m = 64;
      std::array<std::pair<double, double>, m> out{};
      for (int i = 0; i < m; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
          double p0 = 1.0, p1 = 0.0;
          for (int j = 0; j < m; ++j) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
          }
          dp = m * (z * p0 - p1) / (z * z - 1.0);
          const double dz = p0 / dp;
          z -= dz;
          if (std::abs(dz) < 1e-15) break;
        }
        out[i] = {0.5 * (1.0 - z), 1.0 / ((1.0 - z * z) * dp * dp)};  // mapped to [0,1]
      }
      return out;
    }();
    double acc = 0.0;
    for (const auto& [u, w] : nodes) {
      const double rr = radius * u * u;
      acc += w * yukawa_radial(n, rr, a0) * std::pow(rr, n - 1) * 2.0 * radius * u;
    }
    integral = s * acc;
  }
  return integral / cell_volume;
}

}  // namespace cliffop
