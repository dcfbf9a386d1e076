#include "cliffop/operators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "lattice.hpp"
#include "operators_internal.hpp"

namespace cliffop {

using detail::Index;
using detail::Lattice;
using detail::LatticeField;
using detail::OperatorCache;

std::string to_string(Quadrature q) {
  return q == Quadrature::SingularCellOmit ? "singular-cell-omit" : "singular-cell-correct";
}

Quadrature quadrature_from_string(const std::string& s) {
  if (s == "singular-cell-omit" || s == "omit") return Quadrature::SingularCellOmit;
  if (s == "singular-cell-correct" || s == "correct") return Quadrature::SingularCellCorrect;
  throw std::invalid_argument("unknown quadrature: " + s);
}

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    default: return "skipped";
  }
}

namespace detail {

OperatorCache::OperatorCache(const DomainPtr& domain, const KernelParams& params, int exterior_pad)
    : domain(domain), params(params), n(domain->dim()), N(domain->cells_per_axis()),
      maxpad(exterior_pad + 2), blades(std::size_t{1} << domain->dim()),
      signs(sign_table(domain->dim())), h(domain->spacing()), vol(domain->voxel_volume()),
      yukawa(n, N, maxpad), ekernel(n, N, maxpad) {
  for (int p = 0; p <= maxpad; ++p) lattices.push_back(std::make_unique<Lattice>(*domain, p));

  const long w = 2L * yukawa.reach() + 1;
  auto lin_of = [&](const Index& idx) {
    long s = 0;
    for (int k = 0; k < n; ++k) s = s * w + idx[k];
    return s;
  };
  zero_slot = static_cast<long>(yukawa.slot(Index{}));
  for (const auto& lat : lattices) {
    std::vector<long> lin(lat->size());
    for (std::size_t p = 0; p < lat->size(); ++p) lin[p] = lin_of(lat->index_of(p));
    lattice_lin.push_back(std::move(lin));
  }
  const Lattice& l0 = *lattices[0];
  voxel_lin.resize(domain->voxel_count());
  for (std::size_t v = 0; v < domain->voxel_count(); ++v) {
    voxel_lin[v] = lattice_lin[0][l0.point_of_voxel(v)];
  }

  // Kernel tables over every offset a source voxel can have to a lattice point.
  std::vector<double> x(n);
  const double self_average = yukawa_ball_average(n, params.a0(), vol);
  for (std::size_t s = 0; s < yukawa.size(); ++s) {
    const Index off = yukawa.offset_of(s);
    bool zero = true;
    for (int k = 0; k < n; ++k) {
      x[k] = off[k] * h[k];
      zero = zero && off[k] == 0;
    }
    auto& e = ekernel[s];
    e.fill(Complex{});
    if (zero) {
      yukawa[s] = self_average;
      continue;
    }
    yukawa[s] = yukawa_kernel(x, params.a0());
    const Multivector k = disturbed_kernel(x, params);
    e[0] = k[0];
    for (int j = 0; j < n; ++j) e[1 + j] = k[Blade{1} << j];
  }

  has_phase = params.has_vector_part();
  if (has_phase) {
    for (const auto& lat : lattices) {
      std::vector<Complex> ph(lat->size());
      for (std::size_t p = 0; p < lat->size(); ++p) {
        lat->center(p, x);
        double ax = 0.0;
        for (int k = 0; k < n; ++k) ax += params.a.a[k] * x[k];
        ph[p] = std::polar(1.0, -ax);
      }
      phase_out.push_back(std::move(ph));
    }
    phase_in_voxel.resize(domain->voxel_count());
    for (std::size_t v = 0; v < domain->voxel_count(); ++v) {
      phase_in_voxel[v] = std::conj(phase_out[0][l0.point_of_voxel(v)]);
    }
  }
}

// out[b'] += coef * (e_k in)[b'] or its transpose when adjoint is set.
inline void left_ek_acc(const OperatorCache& c, int k, Complex coef, const Complex* in, Complex* out,
                        bool adjoint) {
  const Blade bit = Blade{1} << k;
  const std::size_t B = c.blades;
  for (std::size_t b = 0; b < B; ++b) {
    const Complex v = in[b];
    if (v == Complex{}) continue;
    const Blade t = static_cast<Blade>(b) ^ bit;
    // forward: e_k e_b = s(k,b) e_t; transpose: e_b -> s(k,t) e_t
    const int s = adjoint ? c.signs[bit * B + t] : c.signs[bit * B + b];
    out[t] += coef * static_cast<double>(s) * v;
  }
}

void para_left_acc(const OperatorCache& c, const ParaMult& m, const Complex* in, Complex* out,
                   bool adjoint) {
  const std::size_t B = c.blades;
  if (m.c0 != Complex{}) {
    const Complex c0 = adjoint ? std::conj(m.c0) : m.c0;
    for (std::size_t b = 0; b < B; ++b) out[b] += c0 * in[b];
  }
  for (int k = 0; k < c.n; ++k) {
    if (m.c[k] == Complex{}) continue;
    left_ek_acc(c, k, adjoint ? std::conj(m.c[k]) : m.c[k], in, out, adjoint);
  }
}

ParaMult disturbance_multiplier(const KernelParams& p) {
  ParaMult m;
  m.c0 = Complex(0.0, p.a0());
  for (int k = 0; k < p.n; ++k) m.c[k] = Complex(0.0, p.a.a[k]);
  return m;
}

void lattice_dirac(const OperatorCache& c, const LatticeField& in, const Lattice& out_lat,
                   const std::vector<std::size_t>& targets, const ParaMult& m,
                   LatticeField& out) {
  const Lattice& in_lat = *in.lattice;
  const std::size_t B = c.blades;
  std::array<long, 4> stride{};
  long s = 1;
  for (int k = c.n - 1; k >= 0; --k) {
    stride[k] = s;
    s *= in_lat.side();
  }
  for (std::size_t p : targets) {
    const std::size_t q = in_lat.point_of(out_lat.index_of(p));
    Complex* o = out.data.data() + p * B;
    const Complex* f = in.data.data() + q * B;
    para_left_acc(c, m, f, o, false);
    for (int k = 0; k < c.n; ++k) {
      const double w = 1.0 / (2.0 * c.h[k]);
      left_ek_acc(c, k, w, f + stride[k] * static_cast<long>(B), o, false);
      left_ek_acc(c, k, -w, f - stride[k] * static_cast<long>(B), o, false);
    }
  }
}

void lattice_dirac_adjoint(const OperatorCache& c, const LatticeField& g, const Lattice& g_lat,
                           const std::vector<std::size_t>& targets, const ParaMult& m,
                           LatticeField& out) {
  const Lattice& out_lat = *out.lattice;
  const std::size_t B = c.blades;
  std::array<long, 4> stride{};
  long s = 1;
  for (int k = c.n - 1; k >= 0; --k) {
    stride[k] = s;
    s *= out_lat.side();
  }
  for (std::size_t p : targets) {
    const std::size_t q = out_lat.point_of(g_lat.index_of(p));
    const Complex* gp = g.data.data() + p * B;
    Complex* o = out.data.data() + q * B;
    para_left_acc(c, m, gp, o, true);
    for (int k = 0; k < c.n; ++k) {
      const double w = 1.0 / (2.0 * c.h[k]);
      left_ek_acc(c, k, w, gp, o + stride[k] * static_cast<long>(B), true);
      left_ek_acc(c, k, -w, gp, o - stride[k] * static_cast<long>(B), true);
    }
  }
}

std::vector<std::size_t> all_points(const Lattice& l) {
  std::vector<std::size_t> out(l.size());
  for (std::size_t p = 0; p < l.size(); ++p) out[p] = p;
  return out;
}

std::vector<std::size_t> voxel_points(const Lattice& l, std::size_t voxels) {
  std::vector<std::size_t> out(voxels);
  for (std::size_t v = 0; v < voxels; ++v) out[v] = l.point_of_voxel(v);
  return out;
}

namespace {

bool all_zero(const Complex* p, std::size_t B) {
  for (std::size_t b = 0; b < B; ++b) {
    if (p[b] != Complex{}) return false;
  }
  return true;
}

}  // namespace

// out(p) += sum_v K(x_p - y_v) src_v h^n
void conv_scalar(const OperatorCache& c, std::span<const Complex> src, LatticeField& out) {
  const Lattice& lat = *out.lattice;
  const auto& lin = c.lattice_lin[lat.pad()];
  const std::size_t B = c.blades;
  for (std::size_t v = 0; v < c.voxel_lin.size(); ++v) {
    const Complex* s = src.data() + v * B;
    if (all_zero(s, B)) continue;
    const long base = c.zero_slot - c.voxel_lin[v];
    for (std::size_t p = 0; p < lat.size(); ++p) {
      const double k = c.yukawa[static_cast<std::size_t>(base + lin[p])] * c.vol;
      Complex* o = out.data.data() + p * B;
      for (std::size_t b = 0; b < B; ++b) o[b] += k * s[b];
    }
  }
}

void conv_scalar_adjoint(const OperatorCache& c, const LatticeField& g, std::span<Complex> out) {
  const Lattice& lat = *g.lattice;
  const auto& lin = c.lattice_lin[lat.pad()];
  const std::size_t B = c.blades;
  for (std::size_t v = 0; v < c.voxel_lin.size(); ++v) {
    const long base = c.zero_slot - c.voxel_lin[v];
    Complex* o = out.data() + v * B;
    for (std::size_t p = 0; p < lat.size(); ++p) {
      const Complex* gp = g.data.data() + p * B;
      const double k = c.yukawa[static_cast<std::size_t>(base + lin[p])] * c.vol;
      for (std::size_t b = 0; b < B; ++b) o[b] += k * gp[b];
    }
  }
}

ParaMult kernel_multiplier(const std::array<Complex, 5>& e, int n, double scale) {
  ParaMult m;
  m.c0 = e[0] * scale;
  for (int k = 0; k < n; ++k) m.c[k] = e[1 + k] * scale;
  return m;
}

// out(p) += sum_v e_{ia}(x_p - y_v) u_v h^n, self cell omitted.
void conv_kernel(const OperatorCache& c, std::span<const Complex> src, LatticeField& out) {
  const Lattice& lat = *out.lattice;
  const auto& lin = c.lattice_lin[lat.pad()];
  const std::size_t B = c.blades;
  for (std::size_t v = 0; v < c.voxel_lin.size(); ++v) {
    const Complex* s = src.data() + v * B;
    if (all_zero(s, B)) continue;
    const long base = c.zero_slot - c.voxel_lin[v];
    for (std::size_t p = 0; p < lat.size(); ++p) {
      const auto slot = static_cast<std::size_t>(base + lin[p]);
      if (static_cast<long>(slot) == c.zero_slot) continue;
      para_left_acc(c, kernel_multiplier(c.ekernel[slot], c.n, c.vol), s,
                    out.data.data() + p * B, false);
    }
  }
}

void conv_kernel_adjoint(const OperatorCache& c, const LatticeField& g, std::span<Complex> out) {
  const Lattice& lat = *g.lattice;
  const auto& lin = c.lattice_lin[lat.pad()];
  const std::size_t B = c.blades;
  for (std::size_t v = 0; v < c.voxel_lin.size(); ++v) {
    const long base = c.zero_slot - c.voxel_lin[v];
    Complex* o = out.data() + v * B;
    for (std::size_t p = 0; p < lat.size(); ++p) {
      const auto slot = static_cast<std::size_t>(base + lin[p]);
      if (static_cast<long>(slot) == c.zero_slot) continue;
      const Complex* gp = g.data.data() + p * B;
      if (all_zero(gp, B)) continue;
      para_left_acc(c, kernel_multiplier(c.ekernel[slot], c.n, c.vol), gp, o, true);
    }
  }
}

LatticeField teodorescu_lattice(const OperatorCache& c, std::span<const Complex> u, int pad,
                                Quadrature q) {
  if (pad + 1 > c.maxpad) throw std::logic_error("teodorescu_lattice: pad exceeds the cache");
  const Lattice& lat = *c.lattices[pad];
  LatticeField t(lat, c.blades);
  if (q == Quadrature::SingularCellOmit) {
    conv_kernel(c, u, t);
    return t;
  }
  std::vector<Complex> src(u.begin(), u.end());
  if (c.has_phase) {
    for (std::size_t v = 0; v < c.phase_in_voxel.size(); ++v) {
      for (std::size_t b = 0; b < c.blades; ++b) src[v * c.blades + b] *= c.phase_in_voxel[v];
    }
  }
  LatticeField w(*c.lattices[pad + 1], c.blades);
  conv_scalar(c, src, w);
  ParaMult m;
  m.c0 = Complex(0.0, -c.params.a0());
  lattice_dirac(c, w, lat, all_points(lat), m, t);
  if (c.has_phase) {
    const auto& ph = c.phase_out[pad];
    for (std::size_t p = 0; p < lat.size(); ++p) {
      for (std::size_t b = 0; b < c.blades; ++b) t.data[p * c.blades + b] *= ph[p];
    }
  }
  return t;
}

// Adjoint of teodorescu_lattice followed by restriction to scalar parts is
// not needed separately; this takes any lattice field g on `pad`.
void teodorescu_lattice_adjoint(const OperatorCache& c, LatticeField g, Quadrature q,
                                std::span<Complex> out) {
  const int pad = g.lattice->pad();
  if (q == Quadrature::SingularCellOmit) {
    conv_kernel_adjoint(c, g, out);
    return;
  }
  const Lattice& lat = *g.lattice;
  if (c.has_phase) {
    const auto& ph = c.phase_out[pad];
    for (std::size_t p = 0; p < lat.size(); ++p) {
      for (std::size_t b = 0; b < c.blades; ++b) g.data[p * c.blades + b] *= std::conj(ph[p]);
    }
  }
  LatticeField w(*c.lattices[pad + 1], c.blades);
  ParaMult m;
  m.c0 = Complex(0.0, -c.params.a0());
  lattice_dirac_adjoint(c, g, lat, all_points(lat), m, w);
  conv_scalar_adjoint(c, w, out);
  if (c.has_phase) {
    for (std::size_t v = 0; v < c.phase_in_voxel.size(); ++v) {
      for (std::size_t b = 0; b < c.blades; ++b) {
        out[v * c.blades + b] *= std::conj(c.phase_in_voxel[v]);
      }
    }
  }
}

}  // namespace detail

using namespace detail;

OperatorContext::OperatorContext(DomainPtr domain, KernelParams params, int exterior_pad,
                                 Quadrature quadrature)
    : domain_(std::move(domain)), params_(std::move(params)), exterior_pad_(exterior_pad),
      quadrature_(quadrature) {
  if (!domain_) throw std::invalid_argument("operator context needs a domain");
  if (params_.n != domain_->dim()) {
    throw DimensionMismatch("kernel dimension does not match the domain dimension");
  }
  if (exterior_pad_ < 0) throw std::invalid_argument("exterior_pad must be >= 0");
  cache_ = std::make_shared<const OperatorCache>(domain_, params_, exterior_pad_);
}

namespace {

void require_domain(const Field& u, const OperatorContext& ctx, const char* what) {
  if (!u.domain().same_as(ctx.domain())) {
    throw DomainMismatch(std::string(what) + ": field is not on the operator's domain");
  }
}

Field restrict_to_voxels(const LatticeField& lf, const DomainPtr& domain) {
  Field out(domain);
  const Lattice& lat = *lf.lattice;
  for (std::size_t v = 0; v < out.voxel_count(); ++v) {
    const auto src = lf.at(lat.point_of_voxel(v));
    std::copy(src.begin(), src.end(), out.values(v).begin());
  }
  return out;
}

}  // namespace

Field dirac_apply(const Field& u, const OperatorContext& ctx, StencilDiagnostics* diag) {
  require_domain(u, ctx, "dirac_apply");
  const OperatorCache& c = ctx.cache();
  const Lattice& l0 = *c.lattices[0];
  const std::size_t B = c.blades;
  Field out(ctx.domain_ptr());
  const ParaMult m = disturbance_multiplier(ctx.params());
  std::vector<Complex> d(B);
  auto voxel = [&](Index idx) {
    const std::size_t p = l0.point_of(idx);
    return p == Lattice::npos ? -1L : l0.voxel_at(p);
  };
  for (std::size_t v = 0; v < out.voxel_count(); ++v) {
    const Index idx = l0.index_of(l0.point_of_voxel(v));
    const Complex* f0 = u.values(v).data();
    Complex* o = out.values(v).data();
    para_left_acc(c, m, f0, o, false);
    for (int k = 0; k < c.n; ++k) {
      Index ip = idx, im = idx, ip2 = idx, im2 = idx;
      ip[k] += 1;
      im[k] -= 1;
      ip2[k] += 2;
      im2[k] -= 2;
      const long vp = voxel(ip), vm = voxel(im);
      const double h = c.h[k];
      auto val = [&](long w) { return u.values(static_cast<std::size_t>(w)).data(); };
      if (vp >= 0 && vm >= 0) {
        for (std::size_t b = 0; b < B; ++b) d[b] = (val(vp)[b] - val(vm)[b]) / (2.0 * h);
      } else if (vp >= 0 && voxel(ip2) >= 0) {
        const Complex* f2 = val(voxel(ip2));
        for (std::size_t b = 0; b < B; ++b) {
          d[b] = (-3.0 * f0[b] + 4.0 * val(vp)[b] - f2[b]) / (2.0 * h);
        }
      } else if (vm >= 0 && voxel(im2) >= 0) {
        const Complex* f2 = val(voxel(im2));
        for (std::size_t b = 0; b < B; ++b) {
          d[b] = (3.0 * f0[b] - 4.0 * val(vm)[b] + f2[b]) / (2.0 * h);
        }
      } else if (vp >= 0 || vm >= 0) {
        if (diag) ++diag->first_order_fallbacks;
        if (vp >= 0) {
          for (std::size_t b = 0; b < B; ++b) d[b] = (val(vp)[b] - f0[b]) / h;
        } else {
          for (std::size_t b = 0; b < B; ++b) d[b] = (f0[b] - val(vm)[b]) / h;
        }
      } else {
        const auto x = ctx.domain().voxel_center(v);
        std::string where;
        for (double xi : x) where += (where.empty() ? "" : ",") + std::to_string(xi);
        throw StencilError("dirac_apply: voxel at (" + where + ") has no neighbour along axis " +
                           std::to_string(k + 1));
      }
      left_ek_acc(c, k, 1.0, d.data(), o, false);
    }
  }
  return out;
}

Field teodorescu_apply(const Field& u, const OperatorContext& ctx) {
  require_domain(u, ctx, "teodorescu_apply");
  const auto t = teodorescu_lattice(ctx.cache(), u.data(), 0, ctx.quadrature());
  return restrict_to_voxels(t, ctx.domain_ptr());
}

Multivector teodorescu_at(const Field& u, const OperatorContext& ctx, std::span<const double> x) {
  require_domain(u, ctx, "teodorescu_at");
  const int n = ctx.params().n;
  if (static_cast<int>(x.size()) != n) throw DimensionMismatch("teodorescu_at: point dimension");
  Multivector acc(n);
  std::vector<double> d(n);
  const double vol = ctx.domain().voxel_volume();
  for (std::size_t v = 0; v < u.voxel_count(); ++v) {
    const auto y = ctx.domain().voxel_center(v);
    double r2 = 0.0;
    for (int k = 0; k < n; ++k) {
      d[k] = x[k] - y[k];
      r2 += d[k] * d[k];
    }
    if (std::sqrt(r2) < kSingularGuard) continue;
    left_multiply_accumulate(n, disturbed_kernel(d, ctx.params()).coeffs(), u.values(v), vol,
                             acc.coeffs());
  }
  return acc;
}

Field singular_B_apply(const Field& u, const OperatorContext& ctx) {
  require_domain(u, ctx, "singular_B_apply");
  const OperatorCache& c = ctx.cache();
  LatticeField t = teodorescu_lattice(c, u.data(), 1, ctx.quadrature());
  for (std::size_t p = 0; p < t.lattice->size(); ++p) {
    auto vals = t.at(p);
    std::fill(vals.begin() + 1, vals.end(), Complex{});
  }
  const Lattice& l0 = *c.lattices[0];
  LatticeField out(l0, c.blades);
  lattice_dirac(c, t, l0, voxel_points(l0, u.voxel_count()), disturbance_multiplier(ctx.params()),
                out);
  return restrict_to_voxels(out, ctx.domain_ptr());
}

Field singular_B_adjoint_apply(const Field& u, const OperatorContext& ctx) {
  require_domain(u, ctx, "singular_B_adjoint_apply");
  const OperatorCache& c = ctx.cache();
  const Lattice& l0 = *c.lattices[0];
  LatticeField g(l0, c.blades);
  for (std::size_t v = 0; v < u.voxel_count(); ++v) {
    const auto src = u.values(v);
    std::copy(src.begin(), src.end(), g.at(l0.point_of_voxel(v)).begin());
  }
  LatticeField s(*c.lattices[1], c.blades);
  lattice_dirac_adjoint(c, g, l0, voxel_points(l0, u.voxel_count()),
                        disturbance_multiplier(ctx.params()), s);
  for (std::size_t p = 0; p < s.lattice->size(); ++p) {
    auto vals = s.at(p);
    std::fill(vals.begin() + 1, vals.end(), Complex{});
  }
  Field out(ctx.domain_ptr());
  teodorescu_lattice_adjoint(c, std::move(s), ctx.quadrature(), out.data());
  return out;
}

double derived_free_coefficient(int n) { return -1.0 / n; }

Field pv_derivative_apply(const Field& u, const OperatorContext& ctx, int j, int k,
                          double free_coefficient) {
  require_domain(u, ctx, "pv_derivative_apply");
  const int n = ctx.params().n;
  if (j < 0 || j >= n || k < 0 || k >= n) throw std::out_of_range("pv_derivative_apply: j, k");
  for (std::size_t v = 0; v < u.voxel_count(); ++v) {
    const auto vals = u.values(v);
    for (std::size_t b = 1; b < vals.size(); ++b) {
      if (vals[b] != Complex{}) {
        throw std::invalid_argument("pv_derivative_apply expects a scalar-valued field");
      }
    }
  }
  const OperatorCache& c = ctx.cache();
  const GridDomain& dom = ctx.domain();
  // Derivative table over voxel-to-voxel offsets; the symmetric exclusion of
  // the singular cell is the omitted zero offset.
  detail::OffsetTable<Complex> table(n, dom.cells_per_axis(), 0);
  std::vector<double> x(n);
  const Blade bj = Blade{1} << j;
  for (std::size_t s = 0; s < table.size(); ++s) {
    const Index off = table.offset_of(s);
    bool zero = true;
    for (int m = 0; m < n; ++m) {
      x[m] = off[m] * c.h[m];
      zero = zero && off[m] == 0;
    }
    table[s] = zero ? Complex{} : disturbed_kernel_derivative(x, ctx.params(), k)[bj];
  }
  const Lattice& l0 = *c.lattices[0];
  std::vector<Index> idx(u.voxel_count());
  for (std::size_t v = 0; v < u.voxel_count(); ++v) idx[v] = l0.index_of(l0.point_of_voxel(v));
  Field out(ctx.domain_ptr());
  Index d{};
  for (std::size_t t = 0; t < u.voxel_count(); ++t) {
    Complex acc{};
    for (std::size_t v = 0; v < u.voxel_count(); ++v) {
      const Complex s = u.values(v)[0];
      if (s == Complex{}) continue;
      for (int m = 0; m < n; ++m) d[m] = idx[t][m] - idx[v][m];
      acc += table[table.slot(d)] * s;
    }
    acc *= c.vol;
    if (j == k) acc += free_coefficient * u.values(t)[0];
    out.values(t)[0] = acc;
  }
  return out;
}

FreeTermFit fit_free_term(const Field& u, const OperatorContext& ctx, int j, int k) {
  const OperatorCache& c = ctx.cache();
  const LatticeField t = teodorescu_lattice(c, u.data(), 1, Quadrature::SingularCellOmit);
  const Lattice& l1 = *t.lattice;
  const Lattice& l0 = *c.lattices[0];
  const Blade bj = Blade{1} << j;
  Field fd(ctx.domain_ptr());
  for (std::size_t v = 0; v < u.voxel_count(); ++v) {
    Index ip = l0.index_of(l0.point_of_voxel(v)), im = ip;
    ip[k] += 1;
    im[k] -= 1;
    fd.values(v)[0] =
        (t.at(l1.point_of(ip))[bj] - t.at(l1.point_of(im))[bj]) / (2.0 * c.h[k]);
  }
  const Field pv0 = pv_derivative_apply(u, ctx, j, k, 0.0);
  FreeTermFit fit;
  fit.j = j;
  fit.k = k;
  const Field gap = fd - pv0;
  const double fd_norm = std::max(l2_norm(fd), 1e-300);
  if (j == k) {
    const double uu = l2_inner(u, u);
    fit.fitted = uu > 0.0 ? l2_inner(u, gap) / uu : 0.0;
    fit.discrepancy_fitted = l2_norm(gap - u * Complex(fit.fitted)) / fd_norm;
    fit.discrepancy_derived =
        l2_norm(gap - u * Complex(derived_free_coefficient(ctx.params().n))) / fd_norm;
  } else {
    fit.discrepancy_fitted = l2_norm(gap) / fd_norm;
    fit.discrepancy_derived = fit.discrepancy_fitted;
  }
  return fit;
}

BorelPompeiuResult borel_pompeiu_residual(const Field& u, const OperatorContext& ctx) {
  require_domain(u, ctx, "borel_pompeiu_residual");
  const OperatorCache& c = ctx.cache();
  const int E = ctx.exterior_pad();
  const LatticeField t = teodorescu_lattice(c, u.data(), E + 1, ctx.quadrature());
  const Lattice& le = *c.lattices[E];
  const auto& dist = le.distance_to_mask();
  std::vector<std::size_t> targets;
  for (std::size_t p = 0; p < le.size(); ++p) {
    if (dist[p] <= E) targets.push_back(p);
  }
  LatticeField dt(le, c.blades);
  lattice_dirac(c, t, le, targets, disturbance_multiplier(ctx.params()), dt);

  BorelPompeiuResult r;
  const auto interior = interior_voxels(ctx.domain(), 2);
  double res2 = 0.0, ref2 = 0.0, ext2 = 0.0, all2 = 0.0;
  for (std::size_t v = 0; v < u.voxel_count(); ++v) {
    const auto uv = u.values(v);
    for (const Complex& z : uv) all2 += std::norm(z);
    if (!interior[v]) continue;
    ++r.interior_voxels;
    const auto dv = dt.at(le.point_of_voxel(v));
    for (std::size_t b = 0; b < c.blades; ++b) {
      res2 += std::norm(dv[b] - uv[b]);
      ref2 += std::norm(uv[b]);
    }
  }
  for (std::size_t p : targets) {
    if (le.voxel_at(p) >= 0) continue;
    ++r.collar_points;
    for (const Complex& z : dt.at(p)) ext2 += std::norm(z);
  }
  r.interior_residual = ref2 > 0.0 ? std::sqrt(res2 / ref2) : std::sqrt(res2);
  r.exterior_norm = all2 > 0.0 ? std::sqrt(ext2 / all2) : std::sqrt(ext2);
  return r;
}

std::vector<std::uint8_t> interior_voxels(const GridDomain& domain, int depth) {
  const int n = domain.dim();
  const int N = domain.cells_per_axis();
  const int width = 2 * depth + 1;
  int total = 1;
  for (int m = 0; m < n; ++m) total *= width;
  std::vector<std::uint8_t> out(domain.voxel_count(), 0);
  std::vector<int> q(n);
  for (std::size_t v = 0; v < domain.voxel_count(); ++v) {
    const auto idx = domain.cell_multi_index(domain.cell_of_voxel(v));
    bool inside = true;
    for (int m = 0; m < total && inside; ++m) {
      int rest = m, d2 = 0;
      bool in_box = true;
      for (int a = 0; a < n; ++a) {
        const int step = rest % width - depth;
        rest /= width;
        q[a] = idx[a] + step;
        d2 += step * step;
        in_box = in_box && q[a] >= 0 && q[a] < N;
      }
      if (d2 > depth * depth) continue;
      inside = in_box && domain.voxel_of_cell(domain.cell_flat_index(q)) >= 0;
    }
    out[v] = inside ? 1 : 0;
  }
  return out;
}

std::vector<Blade> natural_subspace(const KernelParams& params) {
  if (params.a0() == 0.0 && !params.has_vector_part()) return vector_blades(params.n);
  return paravector_blades(params.n);
}

SubspaceReport subspace_preservation_check(const Field& u, const OperatorContext& ctx, double tol) {
  SubspaceReport rep;
  const int n = ctx.params().n;
  for (std::size_t v = 0; v < u.voxel_count(); ++v) {
    const auto vals = u.values(v);
    for (std::size_t b = 0; b < vals.size(); ++b) {
      if (grade(static_cast<Blade>(b)) >= 2 && vals[b] != Complex{}) {
        rep.status = CheckStatus::Skipped;
        rep.note = "input has content of grade >= 2";
        return rep;
      }
    }
  }
  const bool vector_input = off_subspace_fraction(u, vector_blades(n), false) == 0.0;
  const Field bu = singular_B_apply(u, ctx);
  std::vector<Blade> target;
  if (vector_input && ctx.params().a0() == 0.0) {
    rep.expected = "vector";
    target = vector_blades(n);
  } else {
    rep.expected = "paravector";
    target = paravector_blades(n);
  }
  rep.off_fraction = off_subspace_fraction(bu, target, false);
  rep.status = rep.off_fraction <= tol ? CheckStatus::Pass : CheckStatus::Fail;
  return rep;
}

}  // namespace cliffop
