#pragma once

// Padded cell lattice around a GridDomain. Multi-indices run over
// [-pad, N + pad) on every axis; the domain's own cells are the indices in
// [0, N). Lattices with different pads share this index convention, so a
// point can be looked up in any lattice that is at least as large.

#include <array>
#include <cstddef>
#include <vector>

#include "cliffop/field_grid.hpp"

namespace cliffop::detail {

using Index = std::array<int, GridDomain::kMaxGridDim>;

class Lattice {
 public:
  Lattice(const GridDomain& domain, int pad);

  int pad() const { return pad_; }
  int dim() const { return n_; }
  int side() const { return side_; }
  std::size_t size() const { return size_; }

  Index index_of(std::size_t p) const;
  /// Flat point of a multi-index, or npos when it falls outside this lattice.
  std::size_t point_of(const Index& idx) const;
  std::size_t point_of_voxel(std::size_t v) const { return voxel_points_[v]; }
  /// Voxel at a lattice point, or -1.
  long voxel_at(std::size_t p) const { return voxel_at_[p]; }
  void center(std::size_t p, std::span<double> out) const;

  /// Chebyshev index distance from each point to the nearest masked cell,
  /// saturated at pad + 1.
  const std::vector<int>& distance_to_mask() const { return dist_; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  const GridDomain* domain_;
  int n_;
  int N_;
  int pad_;
  int side_;
  std::size_t size_;
  std::vector<std::size_t> voxel_points_;
  std::vector<long> voxel_at_;
  std::vector<int> dist_;
};

/// Values on lattice points, `blades` complex coefficients per point.
struct LatticeField {
  const Lattice* lattice = nullptr;
  std::size_t blades = 0;
  std::vector<Complex> data;

  LatticeField() = default;
  LatticeField(const Lattice& l, std::size_t b) : lattice(&l), blades(b), data(l.size() * b) {}
  std::span<Complex> at(std::size_t p) { return {data.data() + p * blades, blades}; }
  std::span<const Complex> at(std::size_t p) const { return {data.data() + p * blades, blades}; }
};

/// Table of a translation-invariant kernel over all offsets between a source
/// voxel and a lattice point of the given pad.
template <typename Entry>
class OffsetTable {
 public:
  OffsetTable() = default;
  OffsetTable(int n, int N, int pad) : n_(n), reach_(N - 1 + pad), width_(2 * reach_ + 1) {
    std::size_t count = 1;
    for (int k = 0; k < n; ++k) count *= static_cast<std::size_t>(width_);
    entries_.resize(count);
  }
  int reach() const { return reach_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t slot(const Index& offset) const {
    std::size_t s = 0;
    for (int k = 0; k < n_; ++k) s = s * width_ + static_cast<std::size_t>(offset[k] + reach_);
    return s;
  }
  Index offset_of(std::size_t s) const {
    Index off{};
    for (int k = n_ - 1; k >= 0; --k) {
      off[k] = static_cast<int>(s % width_) - reach_;
      s /= width_;
    }
    return off;
  }
  Entry& operator[](std::size_t s) { return entries_[s]; }
  const Entry& operator[](std::size_t s) const { return entries_[s]; }

 private:
  int n_ = 0;
  int reach_ = 0;
  int width_ = 1;
  std::vector<Entry> entries_;
};

}  // namespace cliffop::detail
