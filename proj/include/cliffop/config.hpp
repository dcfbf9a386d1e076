#pragma once

// JSON problem documents.
//
// {
//   "domain":  {"box": [[-1,1],[-1,1],[-1,1]], "N": 8,
//               "shape": "ball" | "box" | {"kind": "ball", "center": [...], "radius": r}
//                        | {"kind": "mask_file", "path": "..."}},
//   "a":       {"a0": 0.0, "vec": [0,0,0]},                 optional, default 0
//   "quadrature": "singular-cell-correct" | "singular-cell-omit",  optional
//   "exterior_pad": 2,                                       optional
//   "curve":   {"family": "linear", "params": {"chi": 1.0}}
//              families: linear(chi), saturating(chi0, Ms, beta), identity,
//              scaled(c), identity_plus_saturating
//   "applied_field": {"kind": "constant", "params": {"value": [0,0,1]}}
//                  | {"kind": "dipole", "params": {"moment": [...], "position": [...]}}
//                  | {"kind": "file", "path": "field.csv"},
//   "solver":  {"tol": 1e-8, "max_iter": 10000, "step": "auto" | t,
//               "c": ..., "L": ..., "seed": ...},             c, L default to the law's checks
//   "operator": {"power_iterations": 60, "positivity_samples": 16, "dense": true}
// }
//
// Relative paths (mask and field files) resolve against the document's
// directory.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "cliffop/magneto.hpp"
#include "cliffop/nemyckii.hpp"
#include "cliffop/operators.hpp"
#include "cliffop/solver.hpp"

namespace cliffop {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct OperatorRunOptions {
  int power_iterations = 60;
  int positivity_samples = 16;
  bool dense = true;
};

struct ProblemConfig {
  DomainPtr domain;
  KernelParams params;
  Quadrature quadrature = Quadrature::SingularCellCorrect;
  int exterior_pad = 2;
  std::optional<MHCurveSpec> curve;      // magneto families
  std::optional<PointwiseLaw> law;       // law for the generic solve
  std::optional<Field> applied;
  SolveConfig solver;
  bool solver_c_given = false;
  bool solver_L_given = false;
  OperatorRunOptions op;
};

/// Throws ConfigError with a message naming the offending key.
ProblemConfig parse_problem_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = ".");
ProblemConfig load_problem_config(const std::filesystem::path& path);

}  // namespace cliffop
