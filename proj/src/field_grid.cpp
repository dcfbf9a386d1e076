#include "cliffop/field_grid.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace cliffop {

namespace {

std::size_t ipow(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

std::vector<std::uint8_t> read_mask_file(const std::string& path, std::size_t expected) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open mask file: " + path);
  std::vector<std::uint8_t> mask;
  mask.reserve(expected);
  int v = 0;
  while (in >> v) {
    if (v != 0 && v != 1) throw std::invalid_argument("mask file entries must be 0 or 1");
    mask.push_back(static_cast<std::uint8_t>(v));
  }
  if (mask.size() != expected) {
    throw std::invalid_argument("mask file " + path + " has " + std::to_string(mask.size()) +
                                " entries, expected " + std::to_string(expected));
  }
  return mask;
}

}  // namespace

GridDomain::GridDomain(std::vector<Interval> box, int N, std::vector<std::uint8_t> mask)
    : n_(static_cast<int>(box.size())), N_(N), box_(std::move(box)), mask_(std::move(mask)) {
  if (n_ < 1 || n_ > kMaxGridDim) {
    throw std::invalid_argument("grid dimension must be in [1, 4]");
  }
  if (N_ < 2) throw std::invalid_argument("cells_per_axis must be >= 2");
  volume_ = 1.0;
  for (const auto& iv : box_) {
    if (!(iv.high > iv.low) || !std::isfinite(iv.low) || !std::isfinite(iv.high)) {
      throw std::invalid_argument("degenerate box: every axis needs low < high");
    }
    h_.push_back((iv.high - iv.low) / N_);
    volume_ *= h_.back();
  }
  if (mask_.size() != ipow(N_, n_)) throw std::invalid_argument("mask size must be N^n");
  voxel_of_cell_.assign(mask_.size(), -1);
  for (std::size_t c = 0; c < mask_.size(); ++c) {
    if (mask_[c]) {
      voxel_of_cell_[c] = static_cast<long>(voxels_.size());
      voxels_.push_back(c);
    }
  }
  if (voxels_.empty()) throw std::invalid_argument("domain mask is empty");
}

DomainPtr GridDomain::from_mask(std::vector<Interval> box, int N, std::vector<std::uint8_t> mask) {
  return DomainPtr(new GridDomain(std::move(box), N, std::move(mask)));
}

DomainPtr GridDomain::make(std::vector<Interval> box, int N, const ShapeSpec& shape) {
  const int n = static_cast<int>(box.size());
  if (n < 1 || n > kMaxGridDim) throw std::invalid_argument("grid dimension must be in [1, 4]");
  if (N < 2) throw std::invalid_argument("cells_per_axis must be >= 2");
  for (const auto& iv : box) {
    if (!(iv.high > iv.low)) throw std::invalid_argument("degenerate box: every axis needs low < high");
  }
  const std::size_t cells = ipow(N, n);
  std::vector<std::uint8_t> mask(cells, 1);
  if (shape.kind == ShapeKind::MaskFile) {
    mask = read_mask_file(shape.mask_path, cells);
  } else if (shape.kind == ShapeKind::Ball) {
    std::vector<double> c = shape.center;
    double r = shape.radius;
    if (c.empty()) {
      for (const auto& iv : box) c.push_back(0.5 * (iv.low + iv.high));
    }
    if (static_cast<int>(c.size()) != n) throw std::invalid_argument("ball centre dimension mismatch");
    if (r <= 0.0) {
      r = std::numeric_limits<double>::infinity();
      for (const auto& iv : box) r = std::min(r, 0.5 * (iv.high - iv.low));
    }
    std::vector<int> idx(n, 0);
    for (std::size_t cell = 0; cell < cells; ++cell) {
      std::size_t rest = cell;
      double d2 = 0.0;
      for (int k = n - 1; k >= 0; --k) {
        idx[k] = static_cast<int>(rest % N);
        rest /= N;
        const double h = (box[k].high - box[k].low) / N;
        const double x = box[k].low + (idx[k] + 0.5) * h;
        d2 += (x - c[k]) * (x - c[k]);
      }
      mask[cell] = d2 <= r * r ? 1 : 0;
    }
  }
  return from_mask(std::move(box), N, std::move(mask));
}

DomainPtr GridDomain::unit_ball(int n, int N) {
  return make(std::vector<Interval>(n, Interval{-1.0, 1.0}), N, ShapeSpec::ball());
}

DomainPtr GridDomain::unit_box(int n, int N) {
  return make(std::vector<Interval>(n, Interval{0.0, 1.0}), N, ShapeSpec::full_box());
}

std::vector<int> GridDomain::cell_multi_index(std::size_t cell) const {
  std::vector<int> idx(n_);
  for (int k = n_ - 1; k >= 0; --k) {
    idx[k] = static_cast<int>(cell % N_);
    cell /= N_;
  }
  return idx;
}

std::size_t GridDomain::cell_flat_index(std::span<const int> idx) const {
  std::size_t flat = 0;
  for (int k = 0; k < n_; ++k) flat = flat * N_ + static_cast<std::size_t>(idx[k]);
  return flat;
}

void GridDomain::cell_center(std::span<const int> idx, std::span<double> out) const {
  for (int k = 0; k < n_; ++k) out[k] = box_[k].low + (idx[k] + 0.5) * h_[k];
}

std::vector<double> GridDomain::voxel_center(std::size_t v) const {
  const auto idx = cell_multi_index(voxels_[v]);
  std::vector<double> x(n_);
  cell_center(idx, x);
  return x;
}

bool GridDomain::same_as(const GridDomain& o) const {
  if (this == &o) return true;
  if (n_ != o.n_ || N_ != o.N_ || mask_ != o.mask_) return false;
  for (int k = 0; k < n_; ++k) {
    if (box_[k].low != o.box_[k].low || box_[k].high != o.box_[k].high) return false;
  }
  return true;
}

Field::Field(DomainPtr domain)
    : domain_(std::move(domain)), blades_(std::size_t{1} << domain_->dim()) {
  data_.assign(domain_->voxel_count() * blades_, Complex{});
}

Field Field::from_function(DomainPtr domain,
                           const std::function<Multivector(std::span<const double>)>& fn) {
  Field f(std::move(domain));
  for (std::size_t v = 0; v < f.voxel_count(); ++v) {
    f.set(v, fn(f.domain().voxel_center(v)));
  }
  return f;
}

Multivector Field::at(std::size_t v) const { return Multivector::from_coeffs(dim(), values(v)); }

void Field::set(std::size_t v, const Multivector& m) {
  if (m.dim() != dim()) throw DimensionMismatch("field value dimension mismatch");
  std::copy(m.coeffs().begin(), m.coeffs().end(), values(v).begin());
}

void require_same_domain(const Field& a, const Field& b, const char* what) {
  if (!a.domain().same_as(b.domain())) {
    throw DomainMismatch(std::string(what) + ": fields live on different domains");
  }
}

Field& Field::operator+=(const Field& o) {
  require_same_domain(*this, o, "field addition");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Field& Field::operator-=(const Field& o) {
  require_same_domain(*this, o, "field subtraction");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

Field& Field::operator*=(Complex s) {
  for (auto& c : data_) c *= s;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(Field a, Complex s) { return a *= s; }
Field operator*(Complex s, Field a) { return a *= s; }

double l2_inner(const Field& u, const Field& v) {
  require_same_domain(u, v, "l2_inner");
  const auto a = u.data();
  const auto b = v.data();
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  }
  return s * u.domain().voxel_volume();
}

double l2_norm(const Field& u) { return std::sqrt(std::max(0.0, l2_inner(u, u))); }

Field field_map(const Field& u,
                const std::function<Multivector(std::span<const double>, const Multivector&)>& fn) {
  Field out(u.domain_ptr());
  for (std::size_t v = 0; v < u.voxel_count(); ++v) {
    out.set(v, fn(u.domain().voxel_center(v), u.at(v)));
  }
  return out;
}

double off_subspace_fraction(const Field& u, std::span<const Blade> blades, bool real_only) {
  std::vector<std::uint8_t> keep(u.blades(), 0);
  for (Blade b : blades) keep.at(b) = 1;
  double total = 0.0;
  double off = 0.0;
  for (std::size_t v = 0; v < u.voxel_count(); ++v) {
    const auto vals = u.values(v);
    for (std::size_t b = 0; b < vals.size(); ++b) {
      const double m = std::norm(vals[b]);
      total += m;
      if (!keep[b]) {
        off += m;
      } else if (real_only) {
        off += vals[b].imag() * vals[b].imag();
      }
    }
  }
  return total > 0.0 ? std::sqrt(off / total) : 0.0;
}

std::vector<Blade> paravector_blades(int n) {
  std::vector<Blade> out{0};
  for (int j = 0; j < n; ++j) out.push_back(Blade{1} << j);
  return out;
}

std::vector<Blade> vector_blades(int n) {
  std::vector<Blade> out;
  for (int j = 0; j < n; ++j) out.push_back(Blade{1} << j);
  return out;
}

Field random_field(DomainPtr domain, std::span<const Blade> blades, bool complex_values,
                   std::mt19937_64& rng) {
  Field f(std::move(domain));
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t v = 0; v < f.voxel_count(); ++v) {
    auto vals = f.values(v);
    for (Blade b : blades) {
      const double re = gauss(rng);
      const double im = complex_values ? gauss(rng) : 0.0;
      vals[b] = Complex(re, im);
    }
  }
  return f;
}

}  // namespace cliffop
