#pragma once

#include <array>
#include <memory>
#include <vector>

#include "cliffop/operators.hpp"
#include "lattice.hpp"

namespace cliffop::detail {

struct OperatorCache {
  OperatorCache(const DomainPtr& domain, const KernelParams& params, int exterior_pad);

  DomainPtr domain;
  KernelParams params;
  int n;
  int N;
  int maxpad;
  std::size_t blades;
  std::span<const std::int8_t> signs;
  std::vector<double> h;
  double vol;

  std::vector<std::unique_ptr<Lattice>> lattices;  // pads 0..maxpad
  std::vector<std::vector<long>> lattice_lin;      // linear offset code per point
  std::vector<long> voxel_lin;
  long zero_slot = 0;

  OffsetTable<double> yukawa;                   // K_{a0}; self slot holds the ball mean
  OffsetTable<std::array<Complex, 5>> ekernel;  // e_{ia}: [scalar, e_1..e_n]; self slot zero

  bool has_phase = false;
  std::vector<std::vector<Complex>> phase_out;  // e^{-i<a,x>} per lattice point
  std::vector<Complex> phase_in_voxel;          // e^{+i<a,y>} per voxel
};

/// Left multiplication by c0 + sum_k c_k e_k.
struct ParaMult {
  Complex c0{};
  std::array<Complex, 4> c{};
};

ParaMult disturbance_multiplier(const KernelParams& p);

void para_left_acc(const OperatorCache& c, const ParaMult& m, const Complex* in, Complex* out,
                   bool adjoint);

/// Centred D_h + m on `targets` of out_lat, reading `in` on a lattice one
/// cell larger.
void lattice_dirac(const OperatorCache& c, const LatticeField& in, const Lattice& out_lat,
                   const std::vector<std::size_t>& targets, const ParaMult& m, LatticeField& out);
void lattice_dirac_adjoint(const OperatorCache& c, const LatticeField& g, const Lattice& g_lat,
                           const std::vector<std::size_t>& targets, const ParaMult& m,
                           LatticeField& out);

std::vector<std::size_t> all_points(const Lattice& l);
std::vector<std::size_t> voxel_points(const Lattice& l, std::size_t voxels);

LatticeField teodorescu_lattice(const OperatorCache& c, std::span<const Complex> u, int pad,
                                Quadrature q);

}  // namespace cliffop::detail
