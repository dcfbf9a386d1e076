#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "cliffop/field_grid.hpp"

using namespace cliffop;

TEST_CASE("voxel counts") {
  CHECK(GridDomain::unit_box(3, 4)->voxel_count() == 64);
  CHECK(GridDomain::unit_box(2, 4)->voxel_count() == 16);
  const auto ball = GridDomain::unit_ball(3, 8);
  const double h = ball->spacing(0);
  const double expect = (4.0 * std::numbers::pi / 3.0) / (h * h * h);
  CHECK(std::abs(ball->voxel_count() / expect - 1.0) < 0.25);
  CHECK(ball->voxel_count() < ball->cell_count());
}

TEST_CASE("bad domains") {
  CHECK_THROWS_AS(GridDomain::make({{0, 0}, {0, 1}}, 4, ShapeSpec::full_box()), std::invalid_argument);
  CHECK_THROWS_AS(GridDomain::make({{0, 1}}, 1, ShapeSpec::full_box()), std::invalid_argument);
  CHECK_THROWS_AS(GridDomain::make(std::vector<Interval>(5, {0, 1}), 4, ShapeSpec::full_box()),
                  std::invalid_argument);
  // ball far outside the box leaves nothing
  CHECK_THROWS_AS(GridDomain::make({{0, 1}, {0, 1}}, 4, ShapeSpec::ball({5, 5}, 0.5)), std::invalid_argument);
}

TEST_CASE("mask files") {
  const auto path = std::filesystem::temp_directory_path() / "cliffop_mask_test.txt";
  {
    std::ofstream f(path);
    f << "1 1 0\n0 1 0\n0 0 1\n";
  }
  const auto d = GridDomain::make({{0, 3}, {0, 3}}, 3, ShapeSpec::mask_file(path.string()));
  CHECK(d->voxel_count() == 4);
  // last axis fastest: the second entry is cell (0, 1)
  CHECK(d->voxel_center(1) == std::vector<double>{0.5, 1.5});
  {
    std::ofstream f(path);
    f << "1 1 0 1\n";
  }
  CHECK_THROWS_AS(GridDomain::make({{0, 3}, {0, 3}}, 3, ShapeSpec::mask_file(path.string())),
                  std::invalid_argument);
  std::filesystem::remove(path);
}

TEST_CASE("inner product and norm") {
  const auto d = GridDomain::unit_box(3, 4);
  const auto one = Field::from_function(d, [](auto) { return Multivector::scalar(3, 1.0); });
  CHECK(l2_inner(one, one) == doctest::Approx(1.0));
  CHECK(l2_norm(one) == doctest::Approx(1.0));
  CHECK(l2_norm(Field(d)) == 0.0);

  std::mt19937_64 rng(9);
  const auto blades = paravector_blades(3);
  const auto u = random_field(d, blades, true, rng), v = random_field(d, blades, true, rng);
  CHECK(l2_inner(u, v) == doctest::Approx(l2_inner(v, u)).epsilon(1e-14));
  CHECK(l2_norm(u * Complex(-3.0)) == doctest::Approx(3.0 * l2_norm(u)));

  const auto a = Field::from_function(d, [](auto) { return Multivector::blade(3, 1); });
  const auto b = Field::from_function(d, [](auto) { return Multivector::blade(3, 2); });
  CHECK(l2_inner(a, b) == 0.0);

  // the inner product is the integrated scalar product
  double s = 0.0;
  for (std::size_t k = 0; k < u.voxel_count(); ++k) s += scalar_product(u.at(k), v.at(k));
  CHECK(l2_inner(u, v) == doctest::Approx(s * d->voxel_volume()).epsilon(1e-13));
}

TEST_CASE("fields on different domains do not mix") {
  const auto a = Field(GridDomain::unit_box(3, 4));
  const auto b = Field(GridDomain::unit_box(3, 5));
  CHECK_THROWS_AS(l2_inner(a, b), DomainMismatch);
  CHECK_THROWS_AS(a + b, DomainMismatch);
  // equal geometry from separate constructions is accepted
  CHECK_NOTHROW(l2_inner(a, Field(GridDomain::unit_box(3, 4))));
}

TEST_CASE("field_map") {
  const auto d = GridDomain::unit_ball(3, 6);
  std::mt19937_64 rng(10);
  const auto blades = vector_blades(3);
  const auto u = random_field(d, blades, false, rng);
  const auto same = field_map(u, [](auto, const Multivector& m) { return m; });
  CHECK(l2_norm(same - u) == 0.0);
  const auto zero = field_map(u, [](auto, const Multivector&) { return Multivector(3); });
  CHECK(l2_norm(zero) == 0.0);
  const auto twice = field_map(u, [](auto, const Multivector& m) { return m * Complex(2.0); });
  CHECK(l2_norm(twice) == doctest::Approx(2 * l2_norm(u)));
}

TEST_CASE("subspace fraction") {
  const auto d = GridDomain::unit_box(2, 3);
  std::mt19937_64 rng(11);
  const auto vb = vector_blades(2), pb = paravector_blades(2);
  const auto u = random_field(d, vb, false, rng);
  CHECK(off_subspace_fraction(u, vb, true) == 0.0);
  CHECK(off_subspace_fraction(u, pb, true) == 0.0);
  const auto w = random_field(d, vb, true, rng);
  CHECK(off_subspace_fraction(w, vb, false) == 0.0);
  CHECK(off_subspace_fraction(w, vb, true) > 0.1);
  const std::vector<Blade> scalar_only{0};
  CHECK(off_subspace_fraction(u, scalar_only, false) == doctest::Approx(1.0));
}

TEST_CASE("CSV round trip and validation") {
  const auto d = GridDomain::unit_ball(3, 6);
  std::mt19937_64 rng(12);
  const auto blades = paravector_blades(3);
  const auto u = random_field(d, blades, true, rng);
  std::stringstream ss;
  write_field_csv(ss, u);
  const auto back = read_field_csv(ss, d);
  CHECK(l2_norm(back - u) == 0.0);

  std::stringstream bad_header("a,b,c\n");
  CHECK_THROWS_AS(read_field_csv(bad_header, d), std::invalid_argument);
  std::stringstream outside("x1,x2,x3,blade_mask,re,im\n0.95,0.95,0.95,0,1,0\n");
  CHECK_THROWS_AS(read_field_csv(outside, d), std::invalid_argument);
  std::stringstream wrong_blade("x1,x2,x3,blade_mask,re,im\n0.1666666666666667,0.1666666666666667,0.1666666666666667,9,1,0\n");
  CHECK_THROWS_AS(read_field_csv(wrong_blade, d), std::invalid_argument);
}

TEST_CASE("VTK export") {
  const auto d = GridDomain::unit_ball(3, 4);
  const auto u = Field::from_function(d, [](auto) { return Multivector::blade(3, 4, 2.0); });
  std::stringstream ss;
  write_field_vtk(ss, u, "M");
  const std::string s = ss.str();
  CHECK(s.find("DIMENSIONS 4 4 4") != std::string::npos);
  CHECK(s.find("POINT_DATA 64") != std::string::npos);
  CHECK(s.find("VECTORS M double") != std::string::npos);
  CHECK_THROWS_AS(write_field_vtk(ss, Field(GridDomain::unit_box(2, 3)), "u"), std::invalid_argument);
}
