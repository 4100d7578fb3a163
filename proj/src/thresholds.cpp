#include "varprin/thresholds.hpp"

#include <cmath>
#include <limits>

#include "varprin/errors.hpp"
#include "varprin/parallel.hpp"

namespace varprin {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double capped(double v) { return v > kInfinityCap ? kInf : v; }

}  // namespace

std::string to_string(GridKind kind) {
  return kind == GridKind::geometric_up ? "geometric_up" : "geometric_down_to_infimum";
}

std::vector<double> make_grid(const GridSpec& spec, double inf_psi) {
  if (spec.K < 0) throw UsageError("grid size K must be nonnegative");
  if (!(spec.rho0 > inf_psi)) throw PreconditionError("grid start rho0 must exceed inf Psi");
  std::vector<double> grid;
  for (int k = 0; k <= spec.K; ++k) {
    if (spec.kind == GridKind::geometric_up) {
      grid.push_back(spec.rho0 * std::ldexp(1.0, k));
    } else {
      grid.push_back(inf_psi + (spec.rho0 - inf_psi) * std::ldexp(1.0, -k));
    }
  }
  return grid;
}

RatioCurve sweep(const FunctionalPair& pair, const GridSpec& grid, const SublevelOptions& options) {
  RatioCurve curve;
  curve.grid_kind = grid.kind;
  curve.inf_psi = estimate_inf_psi(pair.psi, pair.domain(), options.search);
  curve.rho_grid = make_grid(grid, curve.inf_psi.value);
  const std::size_t n = curve.rho_grid.size();
  curve.phi_values.assign(n, kNaN);
  curve.alpha_values.assign(n, kNaN);
  curve.gaps.assign(n, "");
  curve.ratio_argmins.assign(n, Vec());
  curve.alpha_argmins.assign(n, Vec());
  parallel_for(n, [&](std::size_t i) {
    try {
      SublevelProblem problem(pair, curve.rho_grid[i], curve.inf_psi, options);
      PhiResult r = phi_of_rho(problem, options);
      curve.phi_values[i] = r.value;
      curve.alpha_values[i] = r.alpha.value;
      curve.ratio_argmins[i] = r.x;
      curve.alpha_argmins[i] = r.alpha.x;
    } catch (const Error& e) {
      curve.gaps[i] = e.what();
    }
  });
  bool any = false;
  for (std::size_t i = 0; i < n; ++i) any = any || curve.has_value(i);
  if (!any) throw NumericalError("sweep: every grid point failed (first: " + curve.gaps.front() + ")");
  return curve;
}

ThresholdEstimate lambda_star(const RatioCurve& curve) {
  ThresholdEstimate est;
  est.value = kInf;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (curve.has_value(i)) est.value = std::min(est.value, curve.phi_values[i]);
  }
  if (!std::isfinite(est.value)) throw PreconditionError("lambda_star: curve has no values");
  est.value = capped(est.value);
  est.direction = EstimateDirection::upper;
  est.note = "grid minimum of phi; upper estimate of the infimum over all rho";
  return est;
}

namespace {

ThresholdEstimate half_minimum(const RatioCurve& curve, std::size_t first, std::size_t last) {
  ThresholdEstimate est;
  est.value = kInf;
  std::vector<double> vals;
  for (std::size_t i = first; i < last; ++i) {
    if (!curve.has_value(i)) continue;
    est.value = std::min(est.value, curve.phi_values[i]);
    vals.push_back(curve.phi_values[i]);
  }
  // Values that rise at every step toward the limit point and at least double.
  if (vals.size() >= 3 && vals.front() > 0.0) {
    bool rising = true;
    for (std::size_t i = 1; i < vals.size(); ++i) rising = rising && vals[i] > vals[i - 1];
    est.diverging = rising && vals.back() >= 2.0 * vals.front();
  }
  est.value = capped(est.value);
  est.direction = EstimateDirection::upper;
  return est;
}

}  // namespace

ThresholdEstimate gamma_estimate(const RatioCurve& curve) {
  if (curve.grid_kind != GridKind::geometric_up || curve.size() < 8) {
    throw PreconditionError("gamma_estimate needs a geometric_up curve with at least 8 points");
  }
  ThresholdEstimate est = half_minimum(curve, curve.size() / 2, curve.size());
  est.note = "running minimum over the upper half of the grid; the liminf is probed, not certified";
  if (est.diverging) est.note += "; tail values grow steadily";
  return est;
}

ThresholdEstimate delta_estimate(const RatioCurve& curve) {
  if (curve.grid_kind != GridKind::geometric_down_to_infimum) {
    throw PreconditionError("delta_estimate needs a geometric_down_to_infimum curve");
  }
  if (curve.size() == 0) throw PreconditionError("delta_estimate: empty curve");
  ThresholdEstimate est = half_minimum(curve, curve.size() / 2, curve.size());
  est.note = "running minimum over the levels closest to inf Psi; the liminf is probed, not certified";
  if (est.diverging) est.note += "; head values grow steadily, the liminf is likely +infinity";
  return est;
}

IdentityReport proof_identity_check(const SublevelProblem& problem, const SublevelOptions& options, int r_points) {
  IdentityReport report;
  PhiResult phi = phi_of_rho(problem, options);
  report.left = phi.value;
  const double a = phi.alpha.value;
  const double scale = 1.0 + std::abs(a);
  const int n = std::max(2, r_points);
  for (int j = 0; j < n; ++j) report.r_grid.push_back(-a + scale * std::pow(10.0, -14.0 + 16.0 * j / (n - 1)));
  report.inner_values.assign(n, kNaN);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t j) {
    try {
      report.inner_values[j] = -beta(problem, report.r_grid[j], phi.alpha, options, {phi.x}).value;
    } catch (const PreconditionError&) {
    }
  });
  report.right = kInf;
  for (double v : report.inner_values) {
    if (!std::isnan(v)) report.right = std::min(report.right, v);
  }
  report.gap = std::abs(report.left - report.right);
  report.passed = std::isfinite(report.right) && report.gap <= 1e-6 * (1.0 + std::abs(report.left));
  return report;
}

BoxMinimum expanding_box_minimum(const Objective& f, const Domain& domain, const SearchOptions& options,
                                 int max_expansions) {
  BoxMinimum out;
  const int n = domain.dim();
  double radius = 10.0;
  for (int e = 0; e < max_expansions; ++e, radius *= 10.0) {
    const Domain box = domain.intersect(Domain::box(Vec::Constant(n, -radius), Vec::Constant(n, radius)));
    Region region{box, {}};
    MultiStartResult r = minimize_multistart(f, region, box, box.project(Vec::Zero(n)), ConstraintMode::penalty, options);
    out.x = r.x;
    out.value = r.value;
    out.radius = radius;
    bool on_face = false;
    for (int i = 0; i < n; ++i) {
      const double tol = 1e-6 * radius;
      if (box.upper()[i] < domain.upper()[i] && r.x[i] >= box.upper()[i] - tol) on_face = true;
      if (box.lower()[i] > domain.lower()[i] && r.x[i] <= box.lower()[i] + tol) on_face = true;
    }
    if (!on_face) {
      out.found = true;
      return out;
    }
  }
  return out;
}

EscapeProbe escape_probe(const Objective& f, const Domain& domain, double radius, int max_iterations) {
  EscapeProbe probe;
  Vec x = domain.project(Vec::Zero(domain.dim()));
  Vec g;
  double value = f(x, &g);
  probe.values.push_back(value);
  double step = 1.0;
  for (int it = 0; it < max_iterations && x.norm() < radius; ++it) {
    probe.iterations = it + 1;
    const Vec d = -projected_gradient(x, g, domain);
    if (d.norm() == 0.0 || step < 1e-14) break;
    const Vec trial = domain.project(x + step * d);
    Vec gt;
    const double vt = f(trial, &gt);
    if (vt < value) {
      x = trial;
      g = gt;
      value = vt;
      probe.values.push_back(value);
      step *= 2.0;
    } else {
      step *= 0.5;
    }
  }
  for (std::size_t i = 1; i < probe.values.size(); ++i) {
    probe.values_decreasing = probe.values_decreasing && probe.values[i] < probe.values[i - 1];
  }
  probe.final_norm = x.norm();
  probe.escaped = probe.final_norm >= radius && probe.values_decreasing;
  return probe;
}

DichotomyReport convex_dichotomy_check(const FunctionalPair& pair, const RatioCurve& curve,
                                       std::optional<double> mu_below, double lambda_above,
                                       const SublevelOptions& options, double escape_radius) {
  if (!pair.phi.properties().convex || !pair.psi.properties().convex) {
    throw PreconditionError("dichotomy check needs Phi and Psi flagged convex");
  }
  if (!pair.psi.properties().coercive) throw PreconditionError("dichotomy check needs Psi flagged coercive");
  DichotomyReport report;
  report.lambda_star = lambda_star(curve).value;
  report.lambda_above = lambda_above;
  report.mu_below = mu_below;
  if (!(lambda_above > report.lambda_star)) {
    throw PreconditionError("lambda_above must exceed the estimated lambda* = " + std::to_string(report.lambda_star));
  }
  if (mu_below && !(*mu_below < report.lambda_star)) {
    throw PreconditionError("mu_below must be below the estimated lambda* = " + std::to_string(report.lambda_star));
  }

  BoxMinimum m = expanding_box_minimum(combination_of(pair.phi, lambda_above, pair.psi), pair.domain(), options.search);
  report.minimum_found = m.found;
  report.minimizer = m.x;
  report.minimum_value = m.value;
  report.box_radius = m.radius;

  if (mu_below) {
    if (report.lambda_star <= 1e-8) {
      report.inconclusive = true;
      report.note = "estimated lambda* is near 0; the no-minimum half of the dichotomy is not tested";
      return report;
    }
    EscapeProbe e = escape_probe(combination_of(pair.phi, *mu_below, pair.psi), pair.domain(), escape_radius);
    report.escape_detected = e.escaped;
    report.values_decreasing = e.values_decreasing;
    report.escape_norm = e.final_norm;
    report.escape_values = e.values;
    report.escape_iterations = e.iterations;
  }
  report.note = report.minimum_found ? "global minimum found at lambda_above" : "no interior minimum in any box";
  if (mu_below) report.note += report.escape_detected ? "; descent escapes at mu_below" : "; no escape at mu_below";
  return report;
}

}  // namespace varprin
