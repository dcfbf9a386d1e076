#include "cliffop/clifford.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <mutex>
#include <string>

namespace cliffop {

namespace {

void check_dim(int n) {
  if (n < 1 || n > kMaxDim) {
    throw std::invalid_argument("Clifford dimension must be in [1, " + std::to_string(kMaxDim) +
                                "], got " + std::to_string(n));
  }
}

void require_same_dim(const Multivector& a, const Multivector& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch(std::string(what) + ": dimension " + std::to_string(a.dim()) +
                            " vs " + std::to_string(b.dim()));
  }
}

}  // namespace

int grade(Blade b) { return std::popcount(b); }

int blade_product_sign(Blade a, Blade b) {
  int swaps = 0;
  // Each generator of b has to move left past every higher generator of a.
  for (Blade rest = a >> 1; rest != 0; rest >>= 1) {
    swaps += std::popcount(rest & b);
  }
  swaps += std::popcount(a & b);  // e_j e_j = -1
  return (swaps & 1) ? -1 : 1;
}

int conjugation_sign(Blade b) {
  const int k = grade(b);
  return ((k * (k + 1) / 2) & 1) ? -1 : 1;
}

std::span<const std::int8_t> sign_table(int n) {
  check_dim(n);
  static std::array<std::vector<std::int8_t>, kMaxDim + 1> tables;
  static std::array<std::once_flag, kMaxDim + 1> flags;
  std::call_once(flags[n], [n] {
    const Blade count = Blade{1} << n;
    auto& t = tables[n];
    t.resize(static_cast<std::size_t>(count) * count);
    for (Blade a = 0; a < count; ++a) {
      for (Blade b = 0; b < count; ++b) {
        t[a * count + b] = static_cast<std::int8_t>(blade_product_sign(a, b));
      }
    }
  });
  return tables[n];
}

Multivector::Multivector(int dim) : dim_(dim) {
  check_dim(dim);
  coeffs_.assign(std::size_t{1} << dim, Complex{});
}

Multivector Multivector::scalar(int dim, Complex c) {
  Multivector m(dim);
  m.coeffs_[0] = c;
  return m;
}

Multivector Multivector::blade(int dim, Blade b, Complex c) {
  Multivector m(dim);
  if (b >= m.size()) throw std::out_of_range("blade index outside the algebra");
  m.coeffs_[b] = c;
  return m;
}

Multivector Multivector::from_coeffs(int dim, std::span<const Complex> coeffs) {
  Multivector m(dim);
  if (coeffs.size() != m.size()) {
    throw DimensionMismatch("coefficient array length must be 2^dim");
  }
  std::copy(coeffs.begin(), coeffs.end(), m.coeffs_.begin());
  return m;
}

Multivector& Multivector::operator+=(const Multivector& o) {
  require_same_dim(*this, o, "addition");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

Multivector& Multivector::operator-=(const Multivector& o) {
  require_same_dim(*this, o, "subtraction");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

Multivector& Multivector::operator*=(Complex s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

bool Multivector::is_zero() const {
  for (const auto& c : coeffs_) {
    if (c != Complex{}) return false;
  }
  return true;
}

Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
Multivector operator-(Multivector a) { return a *= -1.0; }
Multivector operator*(Multivector a, Complex s) { return a *= s; }
Multivector operator*(Complex s, Multivector a) { return a *= s; }

Multivector geometric_product(const Multivector& a, const Multivector& b) {
  require_same_dim(a, b, "geometric product");
  Multivector out(a.dim());
  left_multiply_accumulate(a.dim(), a.coeffs(), b.coeffs(), 1.0, out.coeffs());
  return out;
}

void left_multiply_accumulate(int n, std::span<const Complex> k, std::span<const Complex> u,
                              Complex weight, std::span<Complex> out) {
  const auto signs = sign_table(n);
  const Blade count = Blade{1} << n;
  for (Blade i = 0; i < count; ++i) {
    if (k[i] == Complex{}) continue;
    const Complex ki = weight * k[i];
    const std::int8_t* row = signs.data() + static_cast<std::size_t>(i) * count;
    for (Blade j = 0; j < count; ++j) {
      if (u[j] == Complex{}) continue;
      const Complex term = ki * u[j];
      if (row[j] > 0) {
        out[i ^ j] += term;
      } else {
        out[i ^ j] -= term;
      }
    }
  }
}

void left_multiply_adjoint_accumulate(int n, std::span<const Complex> k,
                                      std::span<const Complex> u, Complex weight,
                                      std::span<Complex> out) {
  // (k u)_{i^j} = sum_i k_i s(i,j) u_j, so the adjoint sends v_{i^j} back to j
  // with coefficient conj(k_i) s(i,j).
  const auto signs = sign_table(n);
  const Blade count = Blade{1} << n;
  for (Blade i = 0; i < count; ++i) {
    if (k[i] == Complex{}) continue;
    const Complex ki = weight * std::conj(k[i]);
    const std::int8_t* row = signs.data() + static_cast<std::size_t>(i) * count;
    for (Blade j = 0; j < count; ++j) {
      const Complex v = u[i ^ j];
      if (v == Complex{}) continue;
      if (row[j] > 0) {
        out[j] += ki * v;
      } else {
        out[j] -= ki * v;
      }
    }
  }
}

Multivector main_involution(const Multivector& a) {
  Multivector out = a;
  for (Blade b = 0; b < out.size(); ++b) {
    if (conjugation_sign(b) < 0) out[b] = -out[b];
  }
  return out;
}

Multivector tilde_involution(const Multivector& c) {
  Multivector out(c.dim());
  for (Blade b = 0; b < out.size(); ++b) {
    out[b] = static_cast<double>(conjugation_sign(b)) * std::conj(c[b]);
  }
  return out;
}

Multivector scalar_part(const Multivector& c) { return Multivector::scalar(c.dim(), c[0]); }

Multivector complement_part(const Multivector& c) {
  Multivector out = c;
  out[0] = Complex{};
  return out;
}

double re_part(const Multivector& c) { return c[0].real(); }

double scalar_product(const Multivector& u, const Multivector& v) {
  require_same_dim(u, v, "scalar product");
  return re_part(geometric_product(tilde_involution(u), v));
}

double norm_squared(const Multivector& c) {
  double s = 0.0;
  for (const auto& x : c.coeffs()) s += std::norm(x);
  return s;
}

double norm(const Multivector& c) { return std::sqrt(norm_squared(c)); }

double max_abs_diff(const Multivector& a, const Multivector& b) {
  require_same_dim(a, b, "comparison");
  double m = 0.0;
  for (Blade i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

bool is_paravector(const Multivector& c, double tol) {
  for (Blade b = 0; b < c.size(); ++b) {
    if (grade(b) >= 2) {
      if (std::abs(c[b]) > tol) return false;
    } else if (std::abs(c[b].imag()) > tol) {
      return false;
    }
  }
  return true;
}

bool is_vector(const Multivector& c, double tol) {
  return is_paravector(c, tol) && std::abs(c[0]) <= tol;
}

bool Paravector::is_zero() const {
  if (a0 != 0.0) return false;
  for (double x : a) {
    if (x != 0.0) return false;
  }
  return true;
}

double Paravector::norm_squared() const {
  double s = a0 * a0;
  for (double x : a) s += x * x;
  return s;
}

Multivector Paravector::to_multivector() const {
  Multivector m(dim());
  m[0] = a0;
  for (int j = 0; j < dim(); ++j) m[Blade{1} << j] = a[j];
  return m;
}

Paravector Paravector::from_multivector(const Multivector& c, double tol) {
  if (!is_paravector(c, tol)) {
    throw NotAParavector("multivector has grade >= 2 or imaginary content");
  }
  Paravector p = zero(c.dim());
  p.a0 = c[0].real();
  for (int j = 0; j < c.dim(); ++j) p.a[j] = c[Blade{1} << j].real();
  return p;
}

}  // namespace cliffop
