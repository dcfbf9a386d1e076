#include "cliffop/config.hpp"

#include <fstream>

namespace cliffop {

namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ConfigError("missing key '" + std::string(key) + "' in " + where);
  }
  return obj.at(key);
}

double number(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
  return v.get<double>();
}

std::vector<double> vec(const json& v, const std::string& where, std::size_t n) {
  if (!v.is_array() || v.size() != n) {
    throw ConfigError(where + " must be an array of " + std::to_string(n) + " numbers");
  }
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(where + " must contain numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

DomainPtr parse_domain(const json& d, const std::filesystem::path& base) {
  const json& box = require(d, "box", "domain");
  if (!box.is_array() || box.empty()) throw ConfigError("domain.box must be a non-empty array of [low, high]");
  std::vector<Interval> iv;
  for (const auto& b : box) {
    const auto lh = vec(b, "domain.box entry", 2);
    iv.push_back({lh[0], lh[1]});
  }
  const json& nj = require(d, "N", "domain");
  if (!nj.is_number_integer()) throw ConfigError("domain.N must be an integer");
  const int N = nj.get<int>();
  ShapeSpec shape = ShapeSpec::full_box();
  if (d.contains("shape")) {
    const json& s = d.at("shape");
    std::string kind;
    if (s.is_string()) {
      kind = s.get<std::string>();
    } else if (s.is_object()) {
      const json& k = require(s, "kind", "domain.shape");
      if (!k.is_string()) throw ConfigError("domain.shape.kind must be a string");
      kind = k.get<std::string>();
    } else {
      throw ConfigError("domain.shape must be a string or an object");
    }
    if (kind == "ball") {
      shape = ShapeSpec::ball();
      if (s.is_object() && s.contains("center")) shape.center = vec(s.at("center"), "domain.shape.center", iv.size());
      if (s.is_object() && s.contains("radius")) shape.radius = number(s, "radius", "domain.shape");
    } else if (kind == "mask_file") {
      const json& p = require(s, "path", "domain.shape");
      shape = ShapeSpec::mask_file((base / p.get<std::string>()).string());
    } else if (kind != "box") {
      throw ConfigError("unknown domain.shape '" + kind + "'");
    }
  }
  try {
    return GridDomain::make(iv, N, shape);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("domain: ") + e.what());
  }
}

double param(const json& params, const char* key, const std::string& family) {
  return number(params, key, "curve.params (" + family + ")");
}

void parse_curve(const json& c, int n, LawLayout layout, ProblemConfig& cfg) {
  const json& fam = require(c, "family", "curve");
  if (!fam.is_string()) throw ConfigError("curve.family must be a string");
  const std::string family = fam.get<std::string>();
  const json params = c.contains("params") ? c.at("params") : json::object();
  if (family == "linear" || family == "saturating") {
    MHCurveSpec spec;
    if (family == "linear") {
      spec.family = MHCurveSpec::Family::Linear;
      spec.chi = param(params, "chi", family);
    } else {
      spec.family = MHCurveSpec::Family::Saturating;
      spec.chi0 = param(params, "chi0", family);
      spec.ms = param(params, "Ms", family);
      spec.beta = param(params, "beta", family);
    }
    try {
      spec.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("curve: ") + e.what());
    }
    if (n != 3) throw ConfigError("M-H curve families need a three-dimensional domain");
    cfg.curve = spec;
    cfg.law = mh_law(spec);
  } else if (family == "identity") {
    cfg.law = identity_law(n, layout);
  } else if (family == "scaled") {
    const double s = param(params, "c", family);
    if (!(s > 0.0)) throw ConfigError("curve.params.c must be positive");
    cfg.law = scaled_law(n, s, layout);
  } else if (family == "identity_plus_saturating") {
    cfg.law = shifted_saturating_law(n, layout);
  } else {
    throw ConfigError("unknown curve.family '" + family + "'");
  }
}

Field parse_applied(const json& a, const DomainPtr& domain, const std::filesystem::path& base) {
  const json& k = require(a, "kind", "applied_field");
  if (!k.is_string()) throw ConfigError("applied_field.kind must be a string");
  const std::string kind = k.get<std::string>();
  const std::size_t n = static_cast<std::size_t>(domain->dim());
  if (kind == "constant") {
    const json& p = require(a, "params", "applied_field");
    return constant_vector_field(domain, vec(require(p, "value", "applied_field.params"),
                                             "applied_field.params.value", n));
  }
  if (kind == "dipole") {
    if (n != 3) throw ConfigError("dipole applied field needs n = 3");
    const json& p = require(a, "params", "applied_field");
    const auto m = vec(require(p, "moment", "applied_field.params"), "applied_field.params.moment", 3);
    const auto pos = vec(require(p, "position", "applied_field.params"), "applied_field.params.position", 3);
    try {
      return dipole_field(domain, m, pos);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("applied_field: ") + e.what());
    }
  }
  if (kind == "file") {
    const json& p = require(a, "path", "applied_field");
    try {
      return read_field_csv((base / p.get<std::string>()).string(), domain);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("applied_field file: ") + e.what());
    }
  }
  throw ConfigError("unknown applied_field.kind '" + kind + "'");
}

}  // namespace

ProblemConfig parse_problem_config(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("problem config must be a JSON object");
  ProblemConfig cfg;
  cfg.domain = parse_domain(require(doc, "domain", "config"), base_dir);
  const int n = cfg.domain->dim();
  if (n < 2 || n > 4) throw ConfigError("operators support n in {2, 3, 4}");

  Paravector a = Paravector::zero(n);
  if (doc.contains("a")) {
    const json& aj = doc.at("a");
    if (aj.contains("a0")) a.a0 = number(aj, "a0", "a");
    if (aj.contains("vec")) a.a = vec(aj.at("vec"), "a.vec", n);
  }
  try {
    cfg.params = KernelParams(n, a);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("a: ") + e.what());
  }
  if (doc.contains("quadrature")) {
    try {
      cfg.quadrature = quadrature_from_string(doc.at("quadrature").get<std::string>());
    } catch (const std::exception& e) {
      throw ConfigError(std::string("quadrature: ") + e.what());
    }
  }
  if (doc.contains("exterior_pad")) {
    cfg.exterior_pad = doc.at("exterior_pad").get<int>();
    if (cfg.exterior_pad < 0) throw ConfigError("exterior_pad must be >= 0");
  }

  const LawLayout layout = (a.a0 == 0.0 && a.is_zero()) ? LawLayout::Vector : LawLayout::Paravector;
  if (doc.contains("curve")) parse_curve(doc.at("curve"), n, layout, cfg);
  if (doc.contains("applied_field")) cfg.applied = parse_applied(doc.at("applied_field"), cfg.domain, base_dir);

  if (doc.contains("solver")) {
    const json& s = doc.at("solver");
    if (s.contains("tol")) cfg.solver.tol = number(s, "tol", "solver");
    if (s.contains("max_iter")) cfg.solver.max_iter = s.at("max_iter").get<int>();
    if (s.contains("step")) {
      const json& st = s.at("step");
      if (st.is_string()) {
        if (st.get<std::string>() != "auto") throw ConfigError("solver.step must be \"auto\" or a number");
      } else if (st.is_number()) {
        cfg.solver.step = st.get<double>();
      } else {
        throw ConfigError("solver.step must be \"auto\" or a number");
      }
    }
    if (s.contains("c")) {
      cfg.solver.c = number(s, "c", "solver");
      cfg.solver_c_given = true;
    }
    if (s.contains("L")) {
      cfg.solver.L = number(s, "L", "solver");
      cfg.solver_L_given = true;
    }
    if (s.contains("seed")) cfg.solver.seed = s.at("seed").get<std::uint64_t>();
    if (!(cfg.solver.tol > 0.0)) throw ConfigError("solver.tol must be positive");
    if (cfg.solver.max_iter < 1) throw ConfigError("solver.max_iter must be >= 1");
  }
  if (doc.contains("operator")) {
    const json& o = doc.at("operator");
    if (o.contains("power_iterations")) cfg.op.power_iterations = o.at("power_iterations").get<int>();
    if (o.contains("positivity_samples")) cfg.op.positivity_samples = o.at("positivity_samples").get<int>();
    if (o.contains("dense")) cfg.op.dense = o.at("dense").get<bool>();
    if (cfg.op.power_iterations < 1 || cfg.op.positivity_samples < 1) {
      throw ConfigError("operator.power_iterations and operator.positivity_samples must be >= 1");
    }
  }
  return cfg;
}

ProblemConfig load_problem_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  try {
    return parse_problem_config(doc, path.parent_path());
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
}

}  // namespace cliffop
