#pragma once

// Complexified Clifford algebra Cl(0,n) with generators e_1..e_n, e_j^2 = -1.
//
// Elements are stored densely over the 2^n basis blades. A blade is addressed
// by its bitmask: bit j set means e_{j+1} is a factor, mask 0 is the unit e_0.
// The factors of a blade are always kept in increasing order.

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace cliffop {

using Complex = std::complex<double>;
using Blade = std::uint32_t;

inline constexpr int kMaxDim = 8;

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotAParavector : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

int grade(Blade b);

/// Sign s with e_a e_b = s e_{a xor b}. Counts the transpositions needed to
/// merge the two ordered factor lists plus one -1 per shared generator.
int blade_product_sign(Blade a, Blade b);

/// (-1)^{|I|(|I|+1)/2}, the sign picked up by e_I under the main involution.
int conjugation_sign(Blade b);

/// Cached table of blade_product_sign for all pairs in dimension n,
/// row-major [a * 2^n + b].
std::span<const std::int8_t> sign_table(int n);

class Multivector {
 public:
  explicit Multivector(int dim);

  static Multivector scalar(int dim, Complex c);
  static Multivector blade(int dim, Blade b, Complex c = 1.0);
  static Multivector from_coeffs(int dim, std::span<const Complex> coeffs);

  int dim() const { return dim_; }
  std::size_t size() const { return coeffs_.size(); }

  Complex& operator[](Blade b) { return coeffs_[b]; }
  const Complex& operator[](Blade b) const { return coeffs_[b]; }

  std::span<Complex> coeffs() { return coeffs_; }
  std::span<const Complex> coeffs() const { return coeffs_; }

  Multivector& operator+=(const Multivector& o);
  Multivector& operator-=(const Multivector& o);
  Multivector& operator*=(Complex s);

  bool is_zero() const;

 private:
  int dim_;
  std::vector<Complex> coeffs_;
};

Multivector operator+(Multivector a, const Multivector& b);
Multivector operator-(Multivector a, const Multivector& b);
Multivector operator-(Multivector a);
Multivector operator*(Multivector a, Complex s);
Multivector operator*(Complex s, Multivector a);

Multivector geometric_product(const Multivector& a, const Multivector& b);
inline Multivector operator*(const Multivector& a, const Multivector& b) {
  return geometric_product(a, b);
}

/// bar(a): blade-wise sign (-1)^{|I|(|I|+1)/2}; reverses products.
Multivector main_involution(const Multivector& a);

/// tilde(c) = sum conj(c_I) bar(e_I).
Multivector tilde_involution(const Multivector& c);

/// P c = c_0 e_0.
Multivector scalar_part(const Multivector& c);

/// Q c = c - P c.
Multivector complement_part(const Multivector& c);

/// Real part of the e_0 coefficient.
double re_part(const Multivector& c);

/// [u, v] = Re(tilde(u) v). Evaluated through the product, not the
/// coefficient shortcut, so it doubles as a check of the algebra.
double scalar_product(const Multivector& u, const Multivector& v);

/// Sum of |c_I|^2.
double norm_squared(const Multivector& c);
double norm(const Multivector& c);

double max_abs_diff(const Multivector& a, const Multivector& b);

/// Grade-0 and grade-1 content restricted to real coefficients.
bool is_paravector(const Multivector& c, double tol = 0.0);
bool is_vector(const Multivector& c, double tol = 0.0);

/// a = a0 e_0 + sum_j a_j e_j with real components.
struct Paravector {
  double a0 = 0.0;
  std::vector<double> a;  // length n

  Paravector() = default;
  Paravector(double scalar, std::vector<double> vec) : a0(scalar), a(std::move(vec)) {}
  static Paravector zero(int n) { return Paravector(0.0, std::vector<double>(n, 0.0)); }

  int dim() const { return static_cast<int>(a.size()); }
  bool is_zero() const;
  double norm_squared() const;

  Multivector to_multivector() const;

  /// Throws NotAParavector if c has grade >= 2 content or imaginary parts
  /// above tol.
  static Paravector from_multivector(const Multivector& c, double tol = 0.0);
};

/// Left multiplication v_out += (k * u) for raw coefficient arrays in
/// dimension n. Used by the field operators to avoid temporaries.
void left_multiply_accumulate(int n, std::span<const Complex> k, std::span<const Complex> u,
                              Complex weight, std::span<Complex> out);

/// out += weight * k^H u, where k^H is the conjugate transpose of the matrix
/// of left multiplication by k (under the coefficient inner product).
void left_multiply_adjoint_accumulate(int n, std::span<const Complex> k,
                                      std::span<const Complex> u, Complex weight,
                                      std::span<Complex> out);

}  // namespace cliffop
