#pragma once

// Fundamental solutions of the (disturbed) Dirac operator.
//
//   e(x)      = -(1/sigma_n) x / |x|^n                      Cauchy kernel, D e = delta
//   K_{a0}(x) = (2 pi)^{-n/2} (a0/|x|)^{n/2-1} K_{n/2-1}(a0 |x|)   (-Laplace + a0^2) K = delta
//   e_{ia}(x) = e^{-i<a,x>} (D - i a0) K_{a0}(x)            D_{ia} e_{ia} = delta
//
// where a = a0 + sum_j a_j e_j is a real paravector and D_{ia} = D + i a (left
// multiplication).

#include <span>
#include <stdexcept>

#include "cliffop/clifford.hpp"

namespace cliffop {

class SingularEvaluation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Points closer to the origin than this are rejected by every kernel.
inline constexpr double kSingularGuard = 1e-12;

struct KernelParams {
  int n = 3;
  Paravector a;

  KernelParams() : a(Paravector::zero(3)) {}
  KernelParams(int dim, Paravector disturbance);

  static KernelParams laplace(int dim) { return KernelParams(dim, Paravector::zero(dim)); }

  double a0() const { return a.a0; }
  bool has_vector_part() const;
};

/// Surface area of the unit sphere in R^n, 2 pi^{n/2} / Gamma(n/2).
double sphere_area(int n);

Multivector cauchy_kernel(std::span<const double> x);

/// K_{a0}(x). For a0 = 0 this is the Laplace fundamental solution,
/// 1/((n-2) sigma_n |x|^{n-2}) for n >= 3 and -log|x| / (2 pi) for n = 2.
double yukawa_kernel(std::span<const double> x, double a0);

/// Radial profile of yukawa_kernel.
double yukawa_radial(int n, double r, double a0);

/// e_{ia}(x), paravector-valued with complex coefficients.
Multivector disturbed_kernel(std::span<const double> x, const KernelParams& params);

/// d/dx_k e_{ia}(x), k zero-based. Uses d/dt[t^{-p} K_p(t)] = -t^{-p} K_{p+1}(t)
/// for the radial profiles.
Multivector disturbed_kernel_derivative(std::span<const double> x, const KernelParams& params,
                                        int k);

/// e_{ia}(x) - e(x).
Multivector kernel_split_difference(std::span<const double> x, const KernelParams& params);

/// (2 pi)^{-n/2} (a0 r)^{n/2} K_{n/2}(a0 r), which tends to 1/sigma_n as r -> 0.
double small_argument_constant(double r, const KernelParams& params);

/// Mean of K_{a0} over the ball centred at the origin whose volume equals
/// cell_volume. Replaces the singular sample in the midpoint rule.
double yukawa_ball_average(int n, double a0, double cell_volume);

}  // namespace cliffop
