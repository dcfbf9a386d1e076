#include "lattice.hpp"

#include <algorithm>

namespace cliffop::detail {

Lattice::Lattice(const GridDomain& domain, int pad)
    : domain_(&domain), n_(domain.dim()), N_(domain.cells_per_axis()), pad_(pad),
      side_(domain.cells_per_axis() + 2 * pad) {
  if (pad < 0) throw std::invalid_argument("lattice pad must be >= 0");
  size_ = 1;
  for (int k = 0; k < n_; ++k) size_ *= static_cast<std::size_t>(side_);

  voxel_at_.assign(size_, -1);
  voxel_points_.resize(domain.voxel_count());
  Index idx{};
  for (std::size_t v = 0; v < domain.voxel_count(); ++v) {
    const auto cell = domain.cell_multi_index(domain.cell_of_voxel(v));
    for (int k = 0; k < n_; ++k) idx[k] = cell[k];
    const std::size_t p = point_of(idx);
    voxel_points_[v] = p;
    voxel_at_[p] = static_cast<long>(v);
  }

  // Chebyshev distance by repeated dilation; pads are a handful of cells.
  const int cap = pad_ + 1;
  dist_.assign(size_, cap);
  for (std::size_t p : voxel_points_) dist_[p] = 0;
  for (int d = 1; d < cap; ++d) {
    std::vector<int> next = dist_;
    for (std::size_t p = 0; p < size_; ++p) {
      if (dist_[p] != d - 1) continue;
      const Index c = index_of(p);
      // visit the 3^n neighbourhood
      int total = 1;
      for (int k = 0; k < n_; ++k) total *= 3;
      for (int m = 0; m < total; ++m) {
        Index q = c;
        int rest = m;
        for (int k = 0; k < n_; ++k) {
          q[k] += rest % 3 - 1;
          rest /= 3;
        }
        const std::size_t qp = point_of(q);
        if (qp != npos && next[qp] > d) next[qp] = d;
      }
    }
    dist_ = std::move(next);
  }
}

Index Lattice::index_of(std::size_t p) const {
  Index idx{};
  for (int k = n_ - 1; k >= 0; --k) {
    idx[k] = static_cast<int>(p % side_) - pad_;
    p /= side_;
  }
  return idx;
}

std::size_t Lattice::point_of(const Index& idx) const {
  std::size_t p = 0;
  for (int k = 0; k < n_; ++k) {
    const int shifted = idx[k] + pad_;
    if (shifted < 0 || shifted >= side_) return npos;
    p = p * side_ + static_cast<std::size_t>(shifted);
  }
  return p;
}

void Lattice::center(std::size_t p, std::span<double> out) const {
  const Index idx = index_of(p);
  domain_->cell_center(std::span<const int>(idx.data(), n_), out);
}

}  // namespace cliffop::detail
