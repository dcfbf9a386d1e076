#include <cmath>
#include <array>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "cliffop/field_grid.hpp"

namespace cliffop {

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool stored(Complex c) {
  // -0.0 is kept so that a round trip is bit exact.
  return c.real() != 0.0 || c.imag() != 0.0 || std::signbit(c.real()) || std::signbit(c.imag());
}

}  // namespace

void write_field_csv(std::ostream& os, const Field& u) {
  const int n = u.dim();
  for (int k = 0; k < n; ++k) os << 'x' << (k + 1) << ',';
  os << "blade_mask,re,im\n";
  for (std::size_t v = 0; v < u.voxel_count(); ++v) {
    const auto x = u.domain().voxel_center(v);
    const auto vals = u.values(v);
    for (std::size_t b = 0; b < vals.size(); ++b) {
      if (!stored(vals[b])) continue;
      for (int k = 0; k < n; ++k) os << fmt17(x[k]) << ',';
      os << b << ',' << fmt17(vals[b].real()) << ',' << fmt17(vals[b].imag()) << '\n';
    }
  }
}

void write_field_csv(const std::string& path, const Field& u) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_field_csv(out, u);
}

Field read_field_csv(std::istream& is, DomainPtr domain) {
  Field f(domain);
  const int n = domain->dim();
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("field CSV: missing header");
  {
    std::string expected;
    for (int k = 0; k < n; ++k) expected += "x" + std::to_string(k + 1) + ",";
    expected += "blade_mask,re,im";
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != expected) throw std::invalid_argument("field CSV: header must be '" + expected + "'");
  }
  std::vector<int> idx(n);
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    std::stringstream ss(line);
    std::string tok;
    std::vector<std::string> cols;
    while (std::getline(ss, tok, ',')) cols.push_back(tok);
    if (static_cast<int>(cols.size()) != n + 3) {
      throw std::invalid_argument("field CSV: row " + std::to_string(row) + " has wrong column count");
    }
    for (int k = 0; k < n; ++k) {
      const double x = std::stod(cols[k]);
      const double rel = (x - domain->box()[k].low) / domain->spacing(k);
      idx[k] = static_cast<int>(std::floor(rel));
      if (idx[k] < 0 || idx[k] >= domain->cells_per_axis()) {
        throw std::invalid_argument("field CSV: row " + std::to_string(row) + " lies outside the box");
      }
    }
    const long vox = domain->voxel_of_cell(domain->cell_flat_index(idx));
    if (vox < 0) {
      throw std::invalid_argument("field CSV: row " + std::to_string(row) + " lies outside the mask");
    }
    const unsigned long blade = std::stoul(cols[n]);
    if (blade >= f.blades()) throw std::invalid_argument("field CSV: blade mask out of range");
    f.values(static_cast<std::size_t>(vox))[blade] =
        Complex(std::strtod(cols[n + 1].c_str(), nullptr), std::strtod(cols[n + 2].c_str(), nullptr));
  }
  return f;
}

Field read_field_csv(const std::string& path, DomainPtr domain) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return read_field_csv(in, std::move(domain));
}

void write_field_vtk(std::ostream& os, const Field& u, const std::string& name) {
  const auto& d = u.domain();
  if (d.dim() != 3) throw std::invalid_argument("VTK export needs a 3-dimensional field");
  const int N = d.cells_per_axis();
  os << "# vtk DataFile Version 3.0\n" << name << "\n" << "ASCII\nDATASET STRUCTURED_POINTS\n";
  os << "DIMENSIONS " << N << ' ' << N << ' ' << N << '\n';
  os << "ORIGIN";
  for (int k = 0; k < 3; ++k) os << ' ' << fmt17(d.box()[k].low + 0.5 * d.spacing(k));
  os << "\nSPACING";
  for (int k = 0; k < 3; ++k) os << ' ' << fmt17(d.spacing(k));
  os << "\nPOINT_DATA " << d.cell_count() << '\n';
  // VTK orders points with x fastest; cells here have the last axis fastest.
  os << "VECTORS " << name << " double\n";
  std::array<int, 3> idx{};
  for (idx[2] = 0; idx[2] < N; ++idx[2]) {
    for (idx[1] = 0; idx[1] < N; ++idx[1]) {
      for (idx[0] = 0; idx[0] < N; ++idx[0]) {
        const long v = d.voxel_of_cell(d.cell_flat_index(idx));
        for (int k = 0; k < 3; ++k) {
          const double val = v < 0 ? 0.0 : u.values(static_cast<std::size_t>(v))[Blade{1} << k].real();
          os << fmt17(val) << (k == 2 ? '\n' : ' ');
        }
      }
    }
  }
  os << "SCALARS mask int 1\nLOOKUP_TABLE default\n";
  for (idx[2] = 0; idx[2] < N; ++idx[2]) {
    for (idx[1] = 0; idx[1] < N; ++idx[1]) {
      for (idx[0] = 0; idx[0] < N; ++idx[0]) {
        os << (d.voxel_of_cell(d.cell_flat_index(idx)) < 0 ? 0 : 1) << '\n';
      }
    }
  }
}

void write_field_vtk(const std::string& path, const Field& u, const std::string& name) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_field_vtk(out, u, name);
}

}  // namespace cliffop
