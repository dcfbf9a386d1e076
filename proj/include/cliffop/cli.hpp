#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cliffop/config.hpp"

namespace cliffop {

/// Exit codes: 0 success, 1 a check failed or found a counterexample,
/// 2 bad input or configuration.
int cli_main(int argc, char** argv);
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Scalar Gaussian bump centred in the domain box, width 0.15 of the
/// smallest box side.
Field gaussian_bump(const DomainPtr& domain);

/// Diagnostics for the `operator` command with the fixed key set
/// norm_estimate, min_rayleigh, bp_interior_residual, bp_exterior_norm,
/// grid_N, dimension, a0, a_vec (plus supplementary keys).
nlohmann::json operator_diagnostics(const ProblemConfig& cfg);

}  // namespace cliffop
