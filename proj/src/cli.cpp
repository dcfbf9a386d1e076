#include "cliffop/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "cliffop/magneto.hpp"
#include "cliffop/verify.hpp"

namespace cliffop {

namespace {

using nlohmann::json;

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kBadInput = 2;

void write_json(const json& j, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << j.dump(2) << "\n";
}

// Constants for the solver: declared in the config, otherwise measured.
bool fill_law_constants(const PointwiseLaw& law, const ProblemConfig& cfg, SolveConfig& sc,
                        json& report) {
  if (cfg.solver_c_given && cfg.solver_L_given) return true;
  SamplingOptions opt;
  opt.samples = 20000;
  const auto mono = check_monotone(law, false, opt);
  report["monotone_check"] = to_json(mono);
  if (mono.verdict != Verdict::NoCounterexample) return false;
  if (!cfg.solver_c_given) sc.c = mono.estimates.at("modulus_c_hat");
  if (!cfg.solver_L_given) {
    if (!law.claims.lipschitz) {
      throw ConfigError("law declares no Lipschitz bound; give solver.L");
    }
    const auto lip = check_lipschitz(law, opt);
    report["lipschitz_check"] = to_json(lip);
    if (lip.verdict != Verdict::NoCounterexample) return false;
    sc.L = std::max(lip.estimates.at("lipschitz_hat"), sc.c);
  }
  return true;
}

int run_verify(std::ostream& out) {
  json j;
  bool ok = true;
  for (const auto& suite : {algebra_suite(), bessel_suite(), kernel_suite()}) {
    j[suite.suite] = to_json(suite);
    ok = ok && suite.pass();
  }
  j["pass"] = ok;
  out << j.dump(2) << "\n";
  return ok ? kOk : kCheckFailed;
}

int run_kernels(int n, double a0, std::vector<double> avec, double rmin, double rmax, int points,
                std::ostream& out) {
  if (avec.empty()) avec.assign(n, 0.0);
  if (!(rmin > 0.0) || !(rmax > rmin) || points < 2) {
    throw std::invalid_argument("kernels: need 0 < rmin < rmax and points >= 2");
  }
  const KernelParams p(n, Paravector(a0, avec));
  out << "r,scaled_split,small_argument_constant,inv_sigma_n\n";
  char line[160];
  for (const auto& row : kernel_asymptotics_table(p, rmin, rmax, points)) {
    std::snprintf(line, sizeof line, "%.10g,%.12g,%.12g,%.12g\n", row.r, row.scaled_split,
                  row.small_arg_const, row.inv_sigma);
    out << line;
  }
  return kOk;
}

}  // namespace

Field gaussian_bump(const DomainPtr& domain) {
  const auto& box = domain->box();
  double width = std::numeric_limits<double>::infinity();
  std::vector<double> center;
  for (const auto& iv : box) {
    width = std::min(width, iv.high - iv.low);
    center.push_back(0.5 * (iv.low + iv.high));
  }
  const double s = 0.15 * width;
  const int n = domain->dim();
  return Field::from_function(domain, [&](std::span<const double> x) {
    double r2 = 0.0;
    for (int k = 0; k < n; ++k) r2 += (x[k] - center[k]) * (x[k] - center[k]);
    return Multivector::scalar(n, std::exp(-r2 / (2.0 * s * s)));
  });
}

json operator_diagnostics(const ProblemConfig& cfg) {
  const OperatorContext ctx(cfg.domain, cfg.params, cfg.exterior_pad, cfg.quadrature);
  json j;
  j["grid_N"] = cfg.domain->cells_per_axis();
  j["dimension"] = cfg.params.n;
  j["a0"] = cfg.params.a0();
  j["a_vec"] = cfg.params.a.a;
  j["quadrature"] = to_string(cfg.quadrature);
  if (cfg.op.dense) {
    const DenseOperator dense = assemble_dense(ctx);
    const NormEstimate ne = power_iteration_norm(dense.matrix, cfg.op.power_iterations);
    const SpectralSummary ss = spectral_summary(dense.matrix);
    j["norm_estimate"] = ne.value;
    j["dense_max_singular_value"] = ss.max_singular_value;
    j["min_symmetrized_eigenvalue"] = ss.min_hermitian_eigenvalue;
  } else {
    j["norm_estimate"] = operator_norm_estimate_matrix_free(ctx, cfg.op.power_iterations).value;
  }
  j["min_rayleigh"] = positivity_estimate(ctx, cfg.op.positivity_samples, false).min_rayleigh;
  const auto bp = borel_pompeiu_residual(gaussian_bump(cfg.domain), ctx);
  j["bp_interior_residual"] = bp.interior_residual;
  j["bp_exterior_norm"] = bp.exterior_norm;
  return j;
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Clifford-analytic singular operators: checks, diagnostics and solvers"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "run the algebra, Bessel and kernel self-checks");

  auto* kernels = app.add_subcommand("kernels", "CSV table of kernel asymptotics");
  int kn = 3, kpoints = 13;
  double ka0 = 1.0, krmin = 1e-4, krmax = 1e-1;
  std::vector<double> kvec;
  kernels->add_option("--n", kn, "dimension")->check(CLI::Range(2, 4));
  kernels->add_option("--a0", ka0, "scalar part of a");
  kernels->add_option("--vec", kvec, "vector part of a");
  kernels->add_option("--rmin", krmin, "smallest radius");
  kernels->add_option("--rmax", krmax, "largest radius");
  kernels->add_option("--points", kpoints, "rows");

  std::string config_path, out_path, out_dir;
  auto* op = app.add_subcommand("operator", "assemble B for a config and print diagnostics JSON");
  double delta = 0.15, eps = 0.05;
  op->add_option("--config", config_path, "problem config")->required();
  op->add_option("--out", out_path, "write the JSON here instead of stdout");
  op->add_option("--delta", delta, "admitted norm excess");
  op->add_option("--eps", eps, "admitted negative Rayleigh quotient");

  auto* solve = app.add_subcommand("solve", "solve F(u) + B u = g from a config");
  std::string field_out;
  solve->add_option("--config", config_path, "problem config")->required();
  solve->add_option("--out", out_path, "write the JSON here instead of stdout");
  solve->add_option("--field-out", field_out, "write the solution as CSV");

  auto* magneto = app.add_subcommand("magneto", "solve the magnetization problem and check (H_i, M)");
  magneto->add_option("--config", config_path, "problem config")->required();
  magneto->add_option("--out-dir", out_dir, "directory for M.csv, M.vtk and report.json");

  std::vector<std::string> argv_store;
  argv_store.push_back("cliffop");
  for (const auto& a : args) argv_store.push_back(a);
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (*verify) return run_verify(out);
    if (*kernels) return run_kernels(kn, ka0, kvec, krmin, krmax, kpoints, out);

    const ProblemConfig cfg = load_problem_config(config_path);

    if (*op) {
      json j = operator_diagnostics(cfg);
      const bool norm_ok = j["norm_estimate"].get<double>() <= 1.0 + delta;
      const bool pos_ok = j["min_rayleigh"].get<double>() >= -eps &&
                          (!j.contains("min_symmetrized_eigenvalue") ||
                           j["min_symmetrized_eigenvalue"].get<double>() >= -eps);
      j["norm_check_pass"] = norm_ok;
      j["positivity_check_pass"] = pos_ok;
      write_json(j, out_path, out);
      return norm_ok && pos_ok ? kOk : kCheckFailed;
    }

    if (*solve) {
      if (!cfg.law) throw ConfigError("solve needs a 'curve' entry");
      if (!cfg.applied) throw ConfigError("solve needs an 'applied_field' entry (the right-hand side g)");
      json report;
      SolveConfig sc = cfg.solver;
      if (!fill_law_constants(*cfg.law, cfg, sc, report)) {
        write_json(report, out_path, out);
        return kCheckFailed;
      }
      const OperatorContext ctx(cfg.domain, cfg.params, cfg.exterior_pad, cfg.quadrature);
      const SolveResult res = solve_monotone(*cfg.law, ctx, *cfg.applied, sc);
      report["solve"] = to_json(res);
      report["final_residual"] = residual(*cfg.law, ctx, res.solution, *cfg.applied);
      if (!field_out.empty()) write_field_csv(field_out, res.solution);
      write_json(report, out_path, out);
      return res.converged ? kOk : kCheckFailed;
    }

    if (*magneto) {
      if (!cfg.curve) throw ConfigError("magneto needs a linear or saturating 'curve'");
      if (!cfg.applied) throw ConfigError("magneto needs an 'applied_field'");
      if (cfg.params.n != 3 || cfg.params.a0() != 0.0 || cfg.params.has_vector_part()) {
        throw ConfigError("magneto needs n = 3 and a = 0");
      }
      MagnetoProblem p(cfg.domain, *cfg.curve, *cfg.applied);
      p.solver = cfg.solver;
      p.quadrature = cfg.quadrature;
      json report;
      try {
        const MagnetoOutcome o = solve_magnetization(p);
        report["monotone_check"] = to_json(o.monotone);
        report["lipschitz_check"] = to_json(o.lipschitz);
        report["solve"] = to_json(o.solve);
        report["inequalities"] = to_json(o.inequalities);
        if (!out_dir.empty()) {
          std::filesystem::create_directories(out_dir);
          write_field_csv((std::filesystem::path(out_dir) / "M.csv").string(), o.solve.solution);
          write_field_vtk((std::filesystem::path(out_dir) / "M.vtk").string(), o.solve.solution, "M");
          write_json(report, (std::filesystem::path(out_dir) / "report.json").string(), out);
        }
        out << report.dump(2) << "\n";
        const bool ok = o.solve.converged && o.inequalities.ineq2_pass && o.inequalities.ineq3_pass;
        return ok ? kOk : kCheckFailed;
      } catch (const PropertyCheckFailed& e) {
        report["error"] = e.what();
        report["failed_check"] = to_json(e.report);
        out << report.dump(2) << "\n";
        return kCheckFailed;
      }
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::invalid_argument& e) {
    err << "bad input: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
  return kBadInput;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace cliffop
