#pragma once

// Superposition (Nemyckii) operators F(u)(x) = f(x, u(x)) and sampling
// checkers for the pointwise conditions that make F bounded, monotone,
// coercive, positive or Lipschitz on L2.
//
// The checks only falsify: a clean run reports "no-counterexample".

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "cliffop/field_grid.hpp"

namespace cliffop {

/// How a field value is read as the real tuple (u_1, ..., u_m):
/// Vector takes the n grade-1 coefficients, Paravector takes the scalar
/// followed by the grade-1 coefficients.
enum class LawLayout { Vector, Paravector };

using ScalarOfPoint = std::function<double(std::span<const double>)>;

struct GrowthClaim {
  ScalarOfPoint a;  // |f(x,u)| <= a(x) + b |u|
  double b = 0.0;
};

struct CoerciveClaim {
  double d = 0.0;   // [f(x,u), u] >= d |u|^2 + g(x)
  ScalarOfPoint g;
};

struct LawClaims {
  std::optional<GrowthClaim> growth;
  bool monotone = false;
  bool strictly_monotone = false;
  std::optional<CoerciveClaim> coercive;
  bool positive = false;
  std::optional<double> asymptotic_radius;
  std::optional<double> lipschitz;
};

struct PointwiseLaw {
  std::string name;
  int n = 3;
  LawLayout layout = LawLayout::Vector;
  std::function<Multivector(std::span<const double> x, std::span<const double> u)> f;
  LawClaims claims;

  int arity() const { return layout == LawLayout::Vector ? n : n + 1; }
  /// The tuple u as an element of the algebra.
  Multivector embed(std::span<const double> u) const;
  Multivector operator()(std::span<const double> x, std::span<const double> u) const { return f(x, u); }
};

/// Thrown when the evaluator fails at a voxel; carries the voxel centre.
class LawEvaluationError : public std::runtime_error {
 public:
  LawEvaluationError(const std::string& what, std::vector<double> where)
      : std::runtime_error(what), point(std::move(where)) {}
  std::vector<double> point;
};

/// Pointwise evaluation on voxel centres. u must be real and carry no content
/// outside the law's layout.
Field nemyckii_apply(const PointwiseLaw& law, const Field& u);

/// Reads the law tuple of voxel v; throws if u leaves the layout.
std::vector<double> law_tuple(const PointwiseLaw& law, const Field& u, std::size_t v);

/// (Fu, u) as l2_inner(F(u), u) and as the midpoint sum of Re(tilde(f) u).
std::pair<double, double> pairing_two_ways(const PointwiseLaw& law, const Field& u);

enum class Verdict { NoCounterexample, Counterexample };
std::string to_string(Verdict v);

struct Counterexample {
  std::vector<double> x;
  std::vector<double> u;
  std::vector<double> v;  // second argument for two-point conditions, else empty
  double violation = 0.0; // how far the inequality fails (> 0)
};

struct FieldCheck {
  bool pass = true;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string relation;  // e.g. "lhs <= rhs"
};

struct PropertyReport {
  std::string property;
  Verdict verdict = Verdict::NoCounterexample;
  std::size_t samples = 0;
  std::optional<Counterexample> counterexample;
  std::map<std::string, double> estimates;   // e.g. modulus_c_hat, lipschitz_hat
  std::map<std::string, double> parameters;  // claim constants used, for replay
  std::optional<FieldCheck> field_check;

  bool passed() const { return verdict == Verdict::NoCounterexample && (!field_check || field_check->pass); }
};

nlohmann::json to_json(const PropertyReport& r);

struct SamplingOptions {
  std::size_t samples = 100000;
  std::uint64_t seed = 20240611;
  double r0 = 10.0;                // half-width of the uniform part of the u distribution
  double tail_fraction = 0.2;      // share of Cauchy-tail draws
  std::vector<Interval> box;       // x sampling box; empty means [-1, 1]^n
  int field_samples = 8;           // random fields for the integrated consequence
};

/// Growth condition; requires law.claims.growth. With a domain the integrated
/// bound ||Fu|| <= ||a|| + b ||u|| is checked on random fields as well.
PropertyReport check_growth(const PointwiseLaw& law, const GridDomain* domain,
                            const SamplingOptions& opt = {});
/// [f(x,u) - f(x,v), u - v] >= 0; strict additionally needs > 0 for u != v.
/// Reports the modulus estimate c_hat = min [df, du] / |du|^2.
PropertyReport check_monotone(const PointwiseLaw& law, bool strict, const SamplingOptions& opt = {});
/// Requires law.claims.coercive.
PropertyReport check_coercive(const PointwiseLaw& law, const GridDomain* domain,
                              const SamplingOptions& opt = {});
/// radius empty: [f(x,u), u] >= 0 everywhere; otherwise only for |u| >= radius.
PropertyReport check_positivity(const PointwiseLaw& law, std::optional<double> radius,
                                const GridDomain* domain, const SamplingOptions& opt = {});
/// Requires law.claims.lipschitz. Reports lipschitz_hat, the largest ratio seen.
PropertyReport check_lipschitz(const PointwiseLaw& law, const SamplingOptions& opt = {});

/// Re-evaluates a stored counterexample; returns its violation (> 0 when it
/// still fails) or nullopt when the report has none.
std::optional<double> replay(const PointwiseLaw& law, const PropertyReport& report);

// --- stock laws ------------------------------------------------------------

PointwiseLaw identity_law(int n, LawLayout layout = LawLayout::Vector);
PointwiseLaw scaled_law(int n, double c, LawLayout layout = LawLayout::Vector);
PointwiseLaw negation_law(int n, LawLayout layout = LawLayout::Vector);
/// f = u - e, e the first tuple direction.
PointwiseLaw shift_law(int n, LawLayout layout = LawLayout::Vector);
/// Componentwise u_j^2.
PointwiseLaw square_law(int n, LawLayout layout = LawLayout::Vector);
/// u / (1 + |u|).
PointwiseLaw saturating_law(int n, LawLayout layout = LawLayout::Vector);
/// u + u / (1 + |u|).
PointwiseLaw shifted_saturating_law(int n, LawLayout layout = LawLayout::Vector);
/// f(x, u) = a(x), independent of u.
PointwiseLaw constant_law(int n, std::function<Multivector(std::span<const double>)> a,
                          LawLayout layout = LawLayout::Vector);
/// sin(|u|) u / |u|.
PointwiseLaw bounded_sine_law(int n, LawLayout layout = LawLayout::Vector);

}  // namespace cliffop
