#pragma once

// MacDonald functions K_p (modified Bessel functions of the second kind) for
// real order p >= 0 and real argument t > 0, and the gamma function.

namespace cliffop {

/// K_p(t). Half-integer orders use the terminating closed form, every other
/// order goes through bessel_k_general. Throws std::domain_error for t <= 0 or
/// p < 0 and std::overflow_error when the result exceeds double range.
double bessel_k(double p, double t);

/// K_p(t) through the general-order path only: Temme's series for t <= 2,
/// Steed's continued fraction above, followed by upward recurrence in the
/// order.
double bessel_k_general(double p, double t);

/// K_{m+1/2}(t) = sqrt(pi/(2t)) e^{-t} sum_{k=0}^{m} (m+k)! / (k! (m-k)! (2t)^k).
double bessel_k_half_integer(int m, double t);

/// True if p is within 1e-14 of a half-odd-integer.
bool is_half_integer(double p);

/// Relative residual of d/dt[t^{-p} K_p(t)] = -t^{-p} K_{p+1}(t), with the
/// derivative taken by a central difference of step rel_step * t.
double bessel_k_recursion_residual(double p, double t, double rel_step = 1e-4);

/// Gamma(x) for x > 0.
double gamma_fn(double x);

}  // namespace cliffop
