#include "varprin/cli.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "varprin/errors.hpp"
#include "varprin/parallel.hpp"
#include "varprin/report.hpp"

namespace varprin {

namespace {

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"run", {"command", "seed", "output", "format"}},
      {"problem", {"label", "constant", "dim", "k", "pair_seed"}},
      {"grid", {"kind", "rho0", "K", "K_down"}},
      {"params",
       {"rho", "lambda", "mu", "r", "direction", "rho0", "n_max", "count", "r_min", "r_max", "radii", "escape_radius",
        "r_points"}},
      {"elliptic", {"N", "a", "b", "c", "s", "q", "p", "alpha", "beta", "lambda", "K_up", "K_down"}},
      {"tolerances", {"starts", "grid_1d", "tol_strict", "tol_root", "tol_cross", "tol_boundary", "tol_sep", "tol_crit"}},
  };
  return keys;
}

const std::set<std::string>& commands() {
  static const std::set<std::string> c = {"sweep",        "thresholds", "minimize",       "constructive", "multiplicity",
                                          "fixed-points", "elliptic",   "identity-check", "dichotomy"};
  return c;
}

std::string join(const std::set<std::string>& s) {
  std::string out;
  for (const auto& x : s) out += (out.empty() ? "" : ", ") + x;
  return out;
}

std::uint64_t parse_seed(const std::string& v, const std::string& where) {
  std::size_t pos = 0;
  unsigned long long s = 0;
  try {
    s = std::stoull(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size() || v.front() == '-') throw UsageError(where + ": seed must be a nonnegative integer");
  return s;
}

}  // namespace

std::optional<std::string> RunConfig::get(const std::string& section, const std::string& key) const {
  auto s = sections.find(section);
  if (s == sections.end()) return std::nullopt;
  auto k = s->second.find(key);
  if (k == s->second.end()) return std::nullopt;
  return k->second;
}

std::optional<double> RunConfig::optional_number(const std::string& section, const std::string& key) const {
  auto v = get(section, key);
  if (!v) return std::nullopt;
  std::size_t pos = 0;
  double d = 0.0;
  try {
    d = std::stod(*v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != v->size()) {
    throw UsageError("[" + section + "] " + key + ": cannot parse '" + *v + "' as a number");
  }
  return d;
}

double RunConfig::number(const std::string& section, const std::string& key, double fallback) const {
  return optional_number(section, key).value_or(fallback);
}

int RunConfig::integer(const std::string& section, const std::string& key, int fallback) const {
  auto d = optional_number(section, key);
  if (!d) return fallback;
  if (*d != std::floor(*d) || std::abs(*d) > 1e9) throw UsageError("[" + section + "] " + key + ": expected an integer");
  return static_cast<int>(*d);
}

std::string RunConfig::text(const std::string& section, const std::string& key, const std::string& fallback) const {
  return get(section, key).value_or(fallback);
}

std::string RunConfig::digest() const {
  std::string canon = "command=" + command + "\nseed=" + std::to_string(seed) + "\nformat=" + format + "\n";
  for (const auto& [section, keys] : sections) {
    if (section == "run") continue;
    for (const auto& [k, v] : keys) canon += section + "." + k + "=" + v + "\n";
  }
  return fnv1a_hex(canon);
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw UsageError("config parse error at " + source + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  RunConfig cfg;
  for (const auto& [section, body] : tree) {
    auto allowed = allowed_keys().find(section);
    if (body.empty()) throw UsageError(source + ": key '" + section + "' outside of a section");
    if (allowed == allowed_keys().end()) throw UsageError(source + ": unknown section [" + section + "]");
    for (const auto& [key, value] : body) {
      if (!allowed->second.count(key)) {
        throw UsageError(source + ": unknown key '" + key + "' in [" + section + "] (allowed: " + join(allowed->second) +
                         ")");
      }
      cfg.sections[section][key] = value.get_value<std::string>();
    }
  }
  cfg.command = cfg.text("run", "command", "");
  if (cfg.command.empty()) throw UsageError(source + ": [run] command is required");
  if (!commands().count(cfg.command)) {
    throw UsageError(source + ": unknown command '" + cfg.command + "' (available: " + join(commands()) + ")");
  }
  if (auto s = cfg.get("run", "seed")) cfg.seed = parse_seed(*s, source + ": [run] seed");
  cfg.output = cfg.text("run", "output", "");
  cfg.format = cfg.text("run", "format", "json");
  if (cfg.format != "json" && cfg.format != "csv") throw UsageError(source + ": [run] format must be json or csv");
  for (const auto& [key, value] : cfg.sections["tolerances"]) {
    if (!(cfg.number("tolerances", key, 1.0) > 0.0)) throw UsageError("[tolerances] " + key + " must be positive");
  }
  return cfg;
}

void apply_overrides(RunConfig& config, const CliOptions& options) {
  if (options.seed) config.seed = *options.seed;
  if (options.output) config.output = *options.output;
  if (options.format) {
    if (*options.format != "json" && *options.format != "csv") throw UsageError("--format must be json or csv");
    config.format = *options.format;
  }
}

namespace {

struct Outcome {
  Json result = Json::object();
  std::string status = "ok";
  /// Two-column plot data, if any.
  std::string plot;
  /// Elliptic solution as x,u rows.
  std::string solution;
};

SublevelOptions sublevel_options(const RunConfig& c) {
  SublevelOptions o;
  o.search.seed = c.seed;
  o.search.starts = c.integer("tolerances", "starts", o.search.starts);
  o.search.grid_1d = c.integer("tolerances", "grid_1d", o.search.grid_1d);
  o.search.tol_boundary_rel = c.number("tolerances", "tol_boundary", o.search.tol_boundary_rel);
  o.tol_strict_rel = c.number("tolerances", "tol_strict", o.tol_strict_rel);
  o.tol_root_rel = c.number("tolerances", "tol_root", o.tol_root_rel);
  o.tol_cross_rel = c.number("tolerances", "tol_cross", o.tol_cross_rel);
  return o;
}

MultiplicityOptions multiplicity_options(const RunConfig& c) {
  MultiplicityOptions m;
  m.sublevel = sublevel_options(c);
  m.tol_sep = c.number("tolerances", "tol_sep", m.tol_sep);
  m.tol_crit_rel = c.number("tolerances", "tol_crit", m.tol_crit_rel);
  return m;
}

FunctionalPair make_pair(const RunConfig& c) {
  const std::string label = c.text("problem", "label", "");
  if (label.empty()) throw UsageError("[problem] label is required");
  if (label == "RANDOM") {
    const int dim = c.integer("problem", "dim", 2);
    return random_convex_quadratic_pair(dim, static_cast<std::uint64_t>(c.integer("problem", "pair_seed", 0)));
  }
  return builtin_pair(label, c.number("problem", "constant", 1.0));
}

PotentialProblem make_potential(const RunConfig& c) {
  const std::string label = c.text("problem", "label", "");
  if (label.empty()) throw UsageError("[problem] label is required");
  return PotentialProblem(builtin_potential(label, c.integer("problem", "dim", 1), c.number("problem", "k", 0.25)));
}

EllipticConfig make_elliptic(const RunConfig& c) {
  EllipticConfig e;
  e.N = c.integer("elliptic", "N", e.N);
  e.a = c.number("elliptic", "a", e.a);
  e.b = c.number("elliptic", "b", e.b);
  e.c = c.number("elliptic", "c", e.c);
  e.s = c.number("elliptic", "s", e.s);
  e.q = c.number("elliptic", "q", e.q);
  e.p = c.number("elliptic", "p", e.p);
  e.alpha_constant = c.number("elliptic", "alpha", e.alpha_constant);
  e.beta_constant = c.number("elliptic", "beta", e.beta_constant);
  e.validate();
  return e;
}

double required(const RunConfig& c, const std::string& section, const std::string& key) {
  auto v = c.optional_number(section, key);
  if (!v) throw UsageError("[" + section + "] " + key + " is required for command " + c.command);
  return *v;
}

GridSpec grid_spec(const RunConfig& c, GridKind kind) {
  GridSpec g;
  g.kind = kind;
  g.rho0 = c.number("grid", "rho0", 1.0);
  g.K = c.integer("grid", kind == GridKind::geometric_up ? "K" : "K_down", c.integer("grid", "K", 12));
  return g;
}

std::string plot_rows(const std::vector<std::pair<double, double>>& rows, const std::string& header) {
  std::string out = "# " + header + "\n";
  for (const auto& [a, b] : rows) out += format_double(a) + " " + format_double(b) + "\n";
  return out;
}

std::string curve_plot(const std::vector<const RatioCurve*>& curves) {
  std::vector<std::pair<double, double>> rows;
  for (const RatioCurve* c : curves) {
    for (std::size_t i = 0; i < c->size(); ++i) {
      if (c->has_value(i)) rows.emplace_back(c->rho_grid[i], c->phi_values[i]);
    }
  }
  std::sort(rows.begin(), rows.end());
  return plot_rows(rows, "rho phi");
}

Outcome cmd_sweep(const RunConfig& c) {
  Outcome o;
  const std::string kind = c.text("grid", "kind", "up");
  if (kind != "up" && kind != "down") throw UsageError("[grid] kind must be up or down for sweep");
  const GridKind gk = kind == "up" ? GridKind::geometric_up : GridKind::geometric_down_to_infimum;
  RatioCurve curve = sweep(make_pair(c), grid_spec(c, gk), sublevel_options(c));
  o.result["curve"] = to_json(curve);
  o.plot = curve_plot({&curve});
  return o;
}

Outcome cmd_thresholds(const RunConfig& c) {
  Outcome o;
  const std::string kind = c.text("grid", "kind", "both");
  if (kind != "up" && kind != "down" && kind != "both") throw UsageError("[grid] kind must be up, down or both");
  const FunctionalPair pair = make_pair(c);
  const SublevelOptions opts = sublevel_options(c);
  ThresholdReport rep;
  rep.config_digest = c.digest();
  std::vector<const RatioCurve*> curves;
  std::optional<RatioCurve> up;
  std::optional<RatioCurve> down;
  if (kind != "down") {
    up = sweep(pair, grid_spec(c, GridKind::geometric_up), opts);
    curves.push_back(&*up);
    if (up->size() >= 8) rep.gamma = gamma_estimate(*up);
  }
  if (kind != "up") {
    down = sweep(pair, grid_spec(c, GridKind::geometric_down_to_infimum), opts);
    curves.push_back(&*down);
    rep.delta = delta_estimate(*down);
  }
  rep.lambda_star = lambda_star(*curves.front());
  if (curves.size() == 2) {
    ThresholdEstimate other = lambda_star(*curves.back());
    if (other.value < rep.lambda_star.value) rep.lambda_star = other;
  }
  o.result["lambda_star"] = to_json(rep.lambda_star);
  o.result["gamma"] = rep.gamma ? to_json(*rep.gamma) : Json(nullptr);
  o.result["delta"] = rep.delta ? to_json(*rep.delta) : Json(nullptr);
  o.result["curve_up"] = up ? to_json(*up) : Json(nullptr);
  o.result["curve_down"] = down ? to_json(*down) : Json(nullptr);
  o.plot = curve_plot(curves);
  return o;
}

Outcome cmd_minimize(const RunConfig& c) {
  Outcome o;
  const SublevelOptions opts = sublevel_options(c);
  SublevelProblem problem(make_pair(c), required(c, "params", "rho"), opts);
  o.result["rho"] = to_json(problem.rho());
  o.result["alpha"] = to_json(alpha(problem, opts));
  if (auto lambda = c.optional_number("params", "lambda")) {
    MinimizeResult m = minimize_combination(problem, *lambda, opts);
    CriticalPointRecord rec;
    rec.x = m.x;
    rec.lambda = *lambda;
    rec.phi_val = problem.phi().value_unchecked(m.x);
    rec.psi_val = problem.psi().value_unchecked(m.x);
    rec.grad_norm = combination_grad_norm(problem.pair(), *lambda, m.x, problem.domain());
    o.result["combination"] = to_json(m);
    o.result["record"] = to_json(rec);
  }
  return o;
}

Outcome cmd_constructive(const RunConfig& c) {
  Outcome o;
  const SublevelOptions opts = sublevel_options(c);
  SublevelProblem problem(make_pair(c), required(c, "params", "rho"), opts);
  const double lambda = required(c, "params", "lambda");
  if (auto r = c.optional_number("params", "r")) o.result["beta"] = to_json(beta(problem, *r, opts));
  ConstructiveResult res = constructive_minimizer(problem, lambda, opts);
  o.result["phi"] = to_json(res.phi);
  o.result["root"] = to_json(res.root);
  o.result["record"] = to_json(res.record);
  o.result["direct"] = to_json(res.direct);
  o.result["discrepancy"] = to_json(res.discrepancy);
  return o;
}

Outcome cmd_multiplicity(const RunConfig& c) {
  Outcome o;
  const MultiplicityOptions opts = multiplicity_options(c);
  const FunctionalPair pair = make_pair(c);
  const double lambda = required(c, "params", "lambda");
  const std::string dir = c.text("params", "direction", "descending");
  const double rho0 = c.number("params", "rho0", 1.0);
  const int n_max = c.integer("params", "n_max", 10);
  MinimaSequence seq;
  if (dir == "descending") {
    const PsiInfimum inf = estimate_inf_psi(pair.psi, pair.domain(), opts.sublevel.search);
    std::vector<double> sched = descending_schedule(inf.value, rho0, n_max);
    sched.erase(sched.begin());
    seq = descending_sequence(pair, lambda, sched, opts);
  } else if (dir == "ascending") {
    seq = ascending_alternative(pair, lambda, ascending_schedule(rho0, n_max), opts);
  } else {
    throw UsageError("[params] direction must be descending or ascending");
  }
  o.result["sequence"] = to_json(seq);
  return o;
}

Outcome cmd_fixed_points(const RunConfig& c) {
  Outcome o;
  const MultiplicityOptions opts = multiplicity_options(c);
  const PotentialProblem problem = make_potential(c);
  if (auto rho = c.optional_number("params", "rho")) {
    HilbertPhiResult h = phi_rho_hilbert(problem, *rho, opts.sublevel);
    Json ball{{"rho", to_json(*rho)}, {"phi", to_json(h.value)}, {"sup_p", to_json(h.sup_p)}};
    if (h.value < 0.5 - 1e-3) ball["fixed_point"] = to_json(fixed_point_in_ball(problem, *rho, opts));
    o.result["ball"] = ball;
  }
  const std::vector<double> radii = log_radii(c.number("params", "r_min", 1.0), c.number("params", "r_max", 1e4),
                                              c.integer("params", "radii", 64));
  GrowthProfile profile = growth_profile(problem, radii, opts.sublevel);
  HuntResult hunt = unbounded_fixed_point_hunt(problem, c.integer("params", "count", 3), profile, opts);
  o.result["profile"] = to_json(profile);
  o.result["hunt"] = to_json(hunt);
  if (!hunt.complete) o.status = "partial";
  std::vector<std::pair<double, double>> rows;
  for (std::size_t i = 0; i < profile.radii.size(); ++i) rows.emplace_back(profile.radii[i], profile.ratios[i]);
  o.plot = plot_rows(rows, "r supP/r^2");
  return o;
}

Outcome cmd_elliptic(const RunConfig& c) {
  Outcome o;
  const EllipticConfig e = make_elliptic(c);
  SublevelOptions opts = elliptic_sublevel_options();
  const SublevelOptions user = sublevel_options(c);
  opts.search.seed = user.search.seed;
  if (c.get("tolerances", "starts")) opts.search.starts = user.search.starts;
  EllipticGrids grids;
  grids.up.K = c.integer("elliptic", "K_up", grids.up.K);
  grids.down.K = c.integer("elliptic", "K_down", grids.down.K);
  EllipticThreshold t = threshold_lambda_star(e, grids, opts);
  o.result["threshold"] = to_json(t);
  const double lambda = c.number("elliptic", "lambda", std::isfinite(t.lambda_star) ? 0.5 * t.lambda_star : 1.0);
  o.result["probe"] = to_json(unbounded_below_probe(e, 1.0, hat_function(e.N)));
  EllipticSolution s = solve(e, lambda, t, opts);
  o.result["solution"] = to_json(s);
  o.solution = "x,u\n";
  for (int i = 0; i < e.N; ++i) o.solution += format_double((i + 1) * e.h()) + "," + format_double(s.u[i]) + "\n";
  return o;
}

Outcome cmd_identity(const RunConfig& c) {
  Outcome o;
  const SublevelOptions opts = sublevel_options(c);
  SublevelProblem problem(make_pair(c), required(c, "params", "rho"), opts);
  IdentityReport r = proof_identity_check(problem, opts, c.integer("params", "r_points", 16));
  o.result["identity"] = to_json(r);
  if (!r.passed) o.status = "identity_gap";
  return o;
}

Outcome cmd_dichotomy(const RunConfig& c) {
  Outcome o;
  const SublevelOptions opts = sublevel_options(c);
  const FunctionalPair pair = make_pair(c);
  RatioCurve curve = sweep(pair, grid_spec(c, GridKind::geometric_up), opts);
  DichotomyReport r = convex_dichotomy_check(pair, curve, c.optional_number("params", "mu"),
                                             required(c, "params", "lambda"), opts,
                                             c.number("params", "escape_radius", 1e6));
  o.result["curve"] = to_json(curve);
  o.result["dichotomy"] = to_json(r);
  return o;
}

Outcome dispatch(const RunConfig& c) {
  if (c.command == "sweep") return cmd_sweep(c);
  if (c.command == "thresholds") return cmd_thresholds(c);
  if (c.command == "minimize") return cmd_minimize(c);
  if (c.command == "constructive") return cmd_constructive(c);
  if (c.command == "multiplicity") return cmd_multiplicity(c);
  if (c.command == "fixed-points") return cmd_fixed_points(c);
  if (c.command == "elliptic") return cmd_elliptic(c);
  if (c.command == "identity-check") return cmd_identity(c);
  return cmd_dichotomy(c);
}

void write_file(const std::string& path, const std::string& data) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  f << data;
}

}  // namespace

int run_config(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = config.command;
  doc["seed"] = config.seed;
  doc["timestamp"] = utc_timestamp();
  doc["config_digest"] = config.digest();
  Json problem = Json::object();
  for (const auto& [section, keys] : config.sections) {
    if (section == "run") continue;
    for (const auto& [k, v] : keys) problem[section][k] = v;
  }
  doc["config"] = problem;

  int code = kExitOk;
  Outcome outcome;
  try {
    outcome = dispatch(config);
    doc["status"] = outcome.status;
    doc["result"] = outcome.result;
  } catch (const NumericalError& e) {
    code = kExitNumerical;
    doc["status"] = "numerical_failure";
    doc["error"] = e.what();
    doc["best"] = to_json(e.best());
  } catch (const InconsistencyError& e) {
    code = kExitNumerical;
    doc["status"] = "numerical_failure";
    doc["error"] = e.what();
    doc["candidates"] = Json::array({to_json(e.first()), to_json(e.second())});
  } catch (const OracleFault& e) {
    code = kExitNumerical;
    doc["status"] = "numerical_failure";
    doc["error"] = e.what();
    doc["point"] = to_json(e.point());
  } catch (const UnboundedBelowError& e) {
    code = kExitNumerical;
    doc["status"] = "numerical_failure";
    doc["error"] = e.what();
    doc["point"] = to_json(e.point());
  } catch (const Error& e) {
    code = kExitValidation;
    doc["status"] = "precondition_failure";
    doc["error"] = e.what();
  }
  if (code != kExitOk) err << "error: " << doc["error"].get<std::string>() << "\n";

  const std::string body = config.format == "json" ? doc.dump(2) + "\n" : flatten_csv(doc);
  if (config.output.empty()) {
    out << body;
  } else {
    write_file(config.output + "." + config.format, body);
    if (!outcome.plot.empty()) write_file(config.output + "_plot.dat", outcome.plot);
    if (!outcome.solution.empty()) write_file(config.output + "_solution.csv", outcome.solution);
  }
  return code;
}

int run(const CliOptions& options, std::ostream& out, std::ostream& err) {
  set_serial(options.serial);
  if (options.list_builtins) {
    for (const auto& b : list_builtins()) out << b.label << ": " << b.description << " [" << b.kind << "]\n";
    return kExitOk;
  }
  RunConfig config;
  try {
    std::string text;
    std::string source = "<config>";
    if (options.config_text) {
      text = *options.config_text;
    } else if (options.config_path) {
      std::ifstream f(*options.config_path);
      if (!f) throw UsageError("cannot read config file " + *options.config_path);
      std::ostringstream ss;
      ss << f.rdbuf();
      text = ss.str();
      source = *options.config_path;
    } else {
      throw UsageError("--config is required (or --list-builtins)");
    }
    config = parse_config(text, source);
    apply_overrides(config, options);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  try {
    return run_config(config, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace varprin
