#include "varprin/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>

namespace varprin {

Json to_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json to_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(to_json(v[i]));
  return a;
}

namespace {

template <class T>
Json optional_json(const std::optional<T>& v) {
  return v ? to_json(*v) : Json(nullptr);
}

Json to_json_list(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(to_json(x));
  return a;
}

}  // namespace

Json to_json(const ThresholdEstimate& e) {
  return Json{{"value", to_json(e.value)},
              {"estimate", to_string(e.direction)},
              {"diverging", e.diverging},
              {"note", e.note}};
}

Json to_json(const RatioCurve& c) {
  Json levels = Json::array();
  for (std::size_t i = 0; i < c.size(); ++i) {
    Json l{{"rho", to_json(c.rho_grid[i])}, {"phi", to_json(c.phi_values[i])}, {"alpha", to_json(c.alpha_values[i])}};
    if (!c.has_value(i)) l["gap"] = c.gaps[i];
    levels.push_back(l);
  }
  return Json{{"grid_kind", to_string(c.grid_kind)},
              {"inf_psi", to_json(c.inf_psi.value)},
              {"inf_psi_argmin", to_json(c.inf_psi.argmin)},
              {"levels", levels}};
}

Json to_json(const CriticalPointRecord& r) {
  return Json{{"kind", to_string(r.kind)},   {"x", to_json(r.x)},
              {"phi", to_json(r.phi_val)},   {"psi", to_json(r.psi_val)},
              {"lambda", to_json(r.lambda)}, {"value", to_json(r.value())},
              {"grad_norm", optional_json(r.grad_norm)}};
}

Json to_json(const MinimizeResult& r) {
  return Json{{"x", to_json(r.x)},
              {"value", to_json(r.value)},
              {"starts_used", r.starts_used},
              {"best_start_index", r.best_start_index},
              {"constraint_active", r.constraint_active},
              {"estimate", to_string(r.estimate)}};
}

Json to_json(const PhiResult& r) {
  return Json{{"value", to_json(r.value)},
              {"alpha", to_json(r.alpha)},
              {"x", to_json(r.x)},
              {"interior_value", to_json(r.interior_value)},
              {"boundary_limit", optional_json(r.boundary_limit)},
              {"attained_in_interior", r.attained_in_interior}};
}

Json to_json(const BetaResult& r) { return Json{{"r", to_json(r.r)}, {"value", to_json(r.value)}, {"x", to_json(r.x)}}; }

Json to_json(const RootResult& r) {
  return Json{{"r0", to_json(r.r0)},
              {"beta", to_json(r.beta)},
              {"evaluations", r.evaluations},
              {"bracket", Json::array({to_json(r.bracket_lo), to_json(r.bracket_hi)})}};
}

Json to_json(const IdentityReport& r) {
  return Json{{"left", to_json(r.left)},       {"right", to_json(r.right)},
              {"gap", to_json(r.gap)},         {"passed", r.passed},
              {"r_grid", to_json_list(r.r_grid)}, {"inner_values", to_json_list(r.inner_values)}};
}

Json to_json(const DichotomyReport& r) {
  Json j{{"lambda_star", to_json(r.lambda_star)},
         {"lambda_above", to_json(r.lambda_above)},
         {"minimum_found", r.minimum_found},
         {"minimizer", to_json(r.minimizer)},
         {"minimum_value", to_json(r.minimum_value)},
         {"box_radius", to_json(r.box_radius)},
         {"mu_below", optional_json(r.mu_below)}};
  if (r.mu_below) {
    j["escape_detected"] = r.escape_detected;
    j["values_decreasing"] = r.values_decreasing;
    j["escape_norm"] = to_json(r.escape_norm);
    j["escape_iterations"] = r.escape_iterations;
    j["escape_values"] = to_json_list(r.escape_values);
  }
  j["inconclusive"] = r.inconclusive;
  j["note"] = r.note;
  return j;
}

Json to_json(const MinimaSequence& s) {
  Json entries = Json::array();
  for (const auto& e : s.entries) {
    Json j{{"rho", to_json(e.rho)}, {"interior", e.interior}, {"critical", e.critical}, {"distinct", e.distinct}};
    j["record"] = e.record.x.size() ? to_json(e.record) : Json(nullptr);
    if (!e.note.empty()) j["note"] = e.note;
    entries.push_back(j);
  }
  return Json{{"lambda", to_json(s.lambda)},
              {"branch", to_string(s.branch)},
              {"diagnostic", s.diagnostic},
              {"schedule", to_json_list(s.schedule)},
              {"entries", entries}};
}

Json to_json(const GrowthProfile& p) {
  Json pts = Json::array();
  for (std::size_t i = 0; i < p.radii.size(); ++i) {
    pts.push_back(Json{{"r", to_json(p.radii[i])},
                       {"ratio", to_json(p.ratios[i])},
                       {"argsup", to_json(p.argsup[i])},
                       {"tail_min", to_json(p.tail_min[i])},
                       {"tail_max", to_json(p.tail_max[i])}});
  }
  Json peaks = Json::array();
  for (auto i : p.peaks) peaks.push_back(i);
  return Json{{"alternations", p.alternations},
              {"exhibits_alternation", p.exhibits_alternation},
              {"peaks", peaks},
              {"points", pts}};
}

Json to_json(const HuntResult& h) {
  Json recs = Json::array();
  for (const auto& r : h.records) recs.push_back(to_json(r));
  Json regions = Json::array();
  for (const auto& [a, b] : h.regions) regions.push_back(Json::array({to_json(a), to_json(b)}));
  return Json{{"complete", h.complete},
              {"hypothesis_exhibited", h.hypothesis_exhibited},
              {"diagnostic", h.diagnostic},
              {"regions", regions},
              {"records", recs}};
}

Json to_json(const EllipticThreshold& t) {
  return Json{{"mu_star", to_json(t.mu_star)},
              {"lambda_star", to_json(t.lambda_star)},
              {"all_lambda_admissible", t.all_lambda_admissible},
              {"rho_at_min", to_json(t.rho_at_min)},
              {"estimate", to_string(t.direction)},
              {"curve_up", to_json(t.curve_up)},
              {"curve_down", to_json(t.curve_down)}};
}

Json to_json(const EllipticSolution& s) {
  return Json{{"lambda", to_json(s.lambda)},
              {"mu", to_json(s.mu)},
              {"rho", to_json(s.rho)},
              {"residual_inf", to_json(s.residual_inf)},
              {"newton_iterations", s.newton_iterations},
              {"minimizer_grad_norm", optional_json(s.minimizer_grad_norm)},
              {"note", s.note},
              {"u", to_json(s.u)}};
}

Json to_json(const UnboundednessReport& r) {
  auto ray = [](const RayProbe& p) {
    return Json{{"passed", p.passed}, {"t", to_json_list(p.t)}, {"values", to_json_list(p.values)}};
  };
  return Json{{"lambda", to_json(r.lambda)},
              {"mechanism_absent", r.mechanism_absent},
              {"below", ray(r.below)},
              {"above", ray(r.above)}};
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void flatten(const Json& j, const std::string& path, std::string& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", out);
  } else {
    std::string value;
    if (j.is_number_float()) {
      value = format_double(j.get<double>());
    } else if (j.is_string()) {
      value = j.get<std::string>();
    } else {
      value = j.dump();
    }
    out += csv_escape(path) + "," + csv_escape(value) + "\n";
  }
}

}  // namespace

std::string flatten_csv(const Json& doc) {
  std::string out = "path,value\n";
  flatten(doc, "", out);
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace varprin
