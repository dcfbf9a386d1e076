#pragma once

// Voxelised bounded domains and multivector-valued grid functions.
//
// A GridDomain is an axis-aligned box split into N cells per axis with a
// boolean mask selecting the cells that make up G. Cells are addressed in
// lexicographic order with the last axis fastest. A Field stores one
// Multivector per masked cell (voxel), in increasing cell order.

#include <functional>
#include <iosfwd>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "cliffop/clifford.hpp"

namespace cliffop {

class DomainMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

enum class ShapeKind { FullBox, Ball, MaskFile };

struct ShapeSpec {
  ShapeKind kind = ShapeKind::FullBox;
  std::vector<double> center;  // Ball; empty means the box centre
  double radius = 0.0;         // Ball; <= 0 means inscribed in the box
  std::string mask_path;       // MaskFile: whitespace separated 0/1, last axis fastest

  static ShapeSpec full_box() { return {}; }
  static ShapeSpec ball(std::vector<double> c = {}, double r = 0.0) {
    return {ShapeKind::Ball, std::move(c), r, {}};
  }
  static ShapeSpec mask_file(std::string path) { return {ShapeKind::MaskFile, {}, 0.0, std::move(path)}; }
};

class GridDomain {
 public:
  static constexpr int kMaxGridDim = 4;

  /// Throws std::invalid_argument on a degenerate box, N < 2, or an empty mask.
  static std::shared_ptr<const GridDomain> make(std::vector<Interval> box, int cells_per_axis,
                                                const ShapeSpec& shape);
  static std::shared_ptr<const GridDomain> from_mask(std::vector<Interval> box, int cells_per_axis,
                                                     std::vector<std::uint8_t> mask);
  /// [-1,1]^n with the inscribed unit ball.
  static std::shared_ptr<const GridDomain> unit_ball(int n, int cells_per_axis);
  /// [0,1]^n, every cell included.
  static std::shared_ptr<const GridDomain> unit_box(int n, int cells_per_axis);

  int dim() const { return n_; }
  int cells_per_axis() const { return N_; }
  const std::vector<Interval>& box() const { return box_; }
  double spacing(int axis) const { return h_[axis]; }
  const std::vector<double>& spacing() const { return h_; }
  double voxel_volume() const { return volume_; }
  /// Discrete measure of G: voxel count times voxel volume.
  double measure() const { return volume_ * static_cast<double>(voxels_.size()); }

  std::size_t cell_count() const { return mask_.size(); }
  std::size_t voxel_count() const { return voxels_.size(); }
  std::span<const std::uint8_t> mask() const { return mask_; }

  /// Cell (flat index) of voxel v.
  std::size_t cell_of_voxel(std::size_t v) const { return voxels_[v]; }
  /// Voxel of a cell, or -1 outside the mask.
  long voxel_of_cell(std::size_t cell) const { return voxel_of_cell_[cell]; }

  std::vector<int> cell_multi_index(std::size_t cell) const;
  std::size_t cell_flat_index(std::span<const int> idx) const;
  /// Cell centre for a possibly out-of-box multi-index.
  void cell_center(std::span<const int> idx, std::span<double> out) const;
  std::vector<double> voxel_center(std::size_t v) const;

  bool same_as(const GridDomain& other) const;

 private:
  GridDomain(std::vector<Interval> box, int N, std::vector<std::uint8_t> mask);

  int n_;
  int N_;
  std::vector<Interval> box_;
  std::vector<double> h_;
  double volume_;
  std::vector<std::uint8_t> mask_;
  std::vector<std::size_t> voxels_;
  std::vector<long> voxel_of_cell_;
};

using DomainPtr = std::shared_ptr<const GridDomain>;

class Field {
 public:
  explicit Field(DomainPtr domain);

  static Field from_function(DomainPtr domain,
                             const std::function<Multivector(std::span<const double>)>& fn);

  const GridDomain& domain() const { return *domain_; }
  const DomainPtr& domain_ptr() const { return domain_; }
  int dim() const { return domain_->dim(); }
  std::size_t blades() const { return blades_; }
  std::size_t voxel_count() const { return domain_->voxel_count(); }

  Multivector at(std::size_t v) const;
  void set(std::size_t v, const Multivector& m);

  std::span<Complex> values(std::size_t v) { return {data_.data() + v * blades_, blades_}; }
  std::span<const Complex> values(std::size_t v) const {
    return {data_.data() + v * blades_, blades_};
  }
  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(Complex s);

 private:
  DomainPtr domain_;
  std::size_t blades_;
  std::vector<Complex> data_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(Field a, Complex s);
Field operator*(Complex s, Field a);

void require_same_domain(const Field& a, const Field& b, const char* what);

/// (u, v) = Re int tilde(u) v dG by the midpoint rule. Uses Re(tilde(u)v)_0 =
/// Re sum_I conj(u_I) v_I, which the clifford tests pin against the product.
double l2_inner(const Field& u, const Field& v);
double l2_norm(const Field& u);

Field field_map(const Field& u,
                const std::function<Multivector(std::span<const double>, const Multivector&)>& fn);

/// L2 norm of the content outside the listed blades, over the L2 norm of u
/// (0 for u = 0). Imaginary parts count as outside when real_only is set.
double off_subspace_fraction(const Field& u, std::span<const Blade> blades, bool real_only);

std::vector<Blade> paravector_blades(int n);
std::vector<Blade> vector_blades(int n);

/// Independent N(0,1) coefficients on the listed blades (imaginary parts too
/// when complex_values is set), zero elsewhere.
Field random_field(DomainPtr domain, std::span<const Blade> blades, bool complex_values,
                   std::mt19937_64& rng);

// --- persistence ---------------------------------------------------------

/// CSV with header x1,...,xn,blade_mask,re,im; one row per voxel per nonzero
/// blade, doubles printed with 17 significant digits.
void write_field_csv(std::ostream& os, const Field& u);
void write_field_csv(const std::string& path, const Field& u);
Field read_field_csv(std::istream& is, DomainPtr domain);
Field read_field_csv(const std::string& path, DomainPtr domain);

/// Legacy VTK structured points (ASCII) with the real grade-1 part of an n = 3
/// field as a vector attribute and the mask as a scalar attribute.
void write_field_vtk(std::ostream& os, const Field& u, const std::string& name);
void write_field_vtk(const std::string& path, const Field& u, const std::string& name);

}  // namespace cliffop
