#include "varprin/fixed_points.hpp"

#include <cmath>

#include "varprin/errors.hpp"
#include "varprin/parallel.hpp"
#include "varprin/random.hpp"

namespace varprin {

PotentialProblem::PotentialProblem(Functional potential) : potential_(std::move(potential)) {
  if (!potential_.has_gradient()) {
    throw CapabilityError("potential '" + potential_.label() + "' needs a gradient (the operator A = P')");
  }
}

namespace {

SublevelOptions with_min_starts(SublevelOptions options, int starts) {
  options.search.starts = std::max(options.search.starts, starts);
  return options;
}

SublevelProblem ball_problem(const PotentialProblem& problem, double rho, const SublevelOptions& options) {
  return SublevelProblem(problem.pair(), rho, PsiInfimum{0.0, Vec::Zero(problem.dim())}, options);
}

std::vector<Vec> sphere_samples(int dim, double radius, std::uint64_t seed, int random_count) {
  std::vector<Vec> pts;
  for (int i = 0; i < dim; ++i) {
    for (double sign : {1.0, -1.0}) {
      Vec e = Vec::Zero(dim);
      e[i] = sign * radius;
      pts.push_back(e);
    }
  }
  if (dim > 1) {
    Rng rng(seed, 0x5f3759dfULL);
    for (int k = 0; k < random_count; ++k) pts.push_back(radius * rng.unit_vector(dim));
  }
  return pts;
}

// inf of -P over the ball: multi-start plus the best sphere sample.
MinimizeResult ball_alpha(const SublevelProblem& sp, const SublevelOptions& options) {
  const Functional& phi = sp.phi();
  const double radius = std::sqrt(sp.rho());
  Vec best_sphere;
  double best_sphere_value = kInf;
  for (const Vec& y : sphere_samples(sp.dim(), radius, options.search.seed, 64)) {
    const double v = phi.value_unchecked(y);
    if (v < best_sphere_value) {
      best_sphere_value = v;
      best_sphere = y;
    }
  }
  MultiStartResult r = minimize_multistart(objective_of(phi), sp.region(), sp.sampling_box(), sp.witness(),
                                           ConstraintMode::penalty, options.search, {best_sphere});
  MinimizeResult out;
  out.x = r.x;
  out.value = phi.value_unchecked(r.x);
  out.starts_used = r.starts_used;
  out.best_start_index = r.best_start_index;
  out.constraint_active = r.constraint_active;
  if (best_sphere_value < out.value) {
    out.x = best_sphere;
    out.value = best_sphere_value;
    out.constraint_active = true;
  }
  return out;
}

// Newton on A(x) - x = 0 with a central-difference Jacobian; steps that do
// not reduce the residual are rejected.
Vec newton_polish(const PotentialProblem& problem, Vec x, int max_it = 8) {
  const int n = problem.dim();
  double res = problem.residual(x);
  for (int it = 0; it < max_it && res > 0.0; ++it) {
    const Vec F = problem.apply(x) - x;
    Eigen::MatrixXd J(n, n);
    for (int j = 0; j < n; ++j) {
      const double h = 1e-6 * (1.0 + std::abs(x[j]));
      Vec xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      J.col(j) = (problem.apply(xp) - problem.apply(xm)) / (2.0 * h);
      J(j, j) -= 1.0;
    }
    const Vec step = J.fullPivLu().solve(-F);
    if (!step.allFinite()) break;
    const Vec y = x + step;
    const double r = problem.residual(y);
    if (!(r < res)) break;
    x = y;
    res = r;
  }
  return x;
}

}  // namespace

std::pair<double, Vec> ball_supremum(const PotentialProblem& problem, double r, const SublevelOptions& options) {
  if (!(r > 0.0)) throw PreconditionError("ball radius must be positive");
  const SublevelOptions s = with_min_starts(options, 64);
  SublevelProblem sp = ball_problem(problem, r * r, s);
  MinimizeResult a = ball_alpha(sp, s);
  return {-a.value, a.x};
}

HilbertPhiResult phi_rho_hilbert(const PotentialProblem& problem, double rho, const SublevelOptions& options) {
  if (!(rho > 0.0)) throw PreconditionError("phi_rho_hilbert requires rho > 0");
  const SublevelOptions s = with_min_starts(options, 64);
  SublevelProblem sp = ball_problem(problem, rho, s);
  HilbertPhiResult out;
  out.phi = phi_of_rho(sp, ball_alpha(sp, s), s);
  out.value = out.phi.value;
  out.sup_p = -out.phi.alpha.value;
  out.argsup = out.phi.alpha.x;
  return out;
}

CriticalPointRecord fixed_point_in_ball(const PotentialProblem& problem, double rho, const MultiplicityOptions& options,
                                        double margin) {
  const HilbertPhiResult h = phi_rho_hilbert(problem, rho, options.sublevel);
  if (!(h.value < 0.5 - margin)) {
    throw PreconditionError("fixed_point_in_ball requires phi(rho) < 1/2 - margin; phi(rho) = " +
                            std::to_string(h.value));
  }
  SublevelProblem sp = ball_problem(problem, rho, options.sublevel);
  CriticalPointRecord rec = sublevel_critical_point(sp, 0.5, options, {h.phi.x});
  rec.kind = CriticalPointRecord::Kind::fixed_point;
  const Vec polished = newton_polish(problem, rec.x);
  if (polished.squaredNorm() < rho) {
    rec.x = polished;
    const FunctionalPair pair = problem.pair();
    rec.phi_val = pair.phi.value_unchecked(rec.x);
    rec.psi_val = pair.psi.value_unchecked(rec.x);
    rec.grad_norm = problem.residual(rec.x);
  }
  const double res = problem.residual(rec.x);
  if (res > kFixedPointTolRel * (1.0 + rec.x.norm())) {
    throw NumericalError("fixed point residual " + std::to_string(res) + " above tolerance", rec.x);
  }
  if (!(rec.x.squaredNorm() < rho)) throw NumericalError("fixed point left the open ball", rec.x);
  return rec;
}

std::vector<double> log_radii(double r_min, double r_max, int count) {
  if (!(r_min > 0.0) || !(r_max > r_min) || count < 2) throw UsageError("log_radii needs 0 < r_min < r_max, count >= 2");
  std::vector<double> r(count);
  const double a = std::log(r_min);
  const double b = std::log(r_max);
  for (int i = 0; i < count; ++i) r[i] = std::exp(a + (b - a) * i / (count - 1));
  r.front() = r_min;
  r.back() = r_max;
  return r;
}

GrowthProfile growth_profile(const PotentialProblem& problem, const std::vector<double>& r_grid,
                             const SublevelOptions& options) {
  if (r_grid.size() < 16) throw PreconditionError("growth_profile needs at least 16 radii");
  for (std::size_t i = 1; i < r_grid.size(); ++i) {
    if (!(r_grid[i] > r_grid[i - 1])) throw PreconditionError("growth_profile needs increasing radii");
  }
  GrowthProfile p;
  const std::size_t n = r_grid.size();
  p.radii = r_grid;
  p.ratios.assign(n, 0.0);
  p.argsup.assign(n, Vec());
  parallel_for(n, [&](std::size_t i) {
    auto [sup, arg] = ball_supremum(problem, r_grid[i], options);
    p.ratios[i] = sup / (r_grid[i] * r_grid[i]);
    p.argsup[i] = arg;
  });
  p.tail_min.assign(n, 0.0);
  p.tail_max.assign(n, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    p.tail_min[k] = k + 1 < n ? std::min(p.ratios[k], p.tail_min[k + 1]) : p.ratios[k];
    p.tail_max[k] = k + 1 < n ? std::max(p.ratios[k], p.tail_max[k + 1]) : p.ratios[k];
  }
  int last_sign = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const int sign = p.ratios[i] > 0.5 ? 1 : (p.ratios[i] < 0.5 ? -1 : 0);
    if (sign != 0) {
      if (last_sign != 0 && sign != last_sign) ++p.alternations;
      last_sign = sign;
    }
    const bool left = i == 0 || p.ratios[i] >= p.ratios[i - 1];
    const bool right = i + 1 == n || p.ratios[i] > p.ratios[i + 1];
    if (p.ratios[i] > 0.5 && left && right) p.peaks.push_back(i);
  }
  const std::size_t h = n / 2;
  p.exhibits_alternation = p.alternations >= 3 && p.tail_min[h] < 0.5 && p.tail_max[h] > 0.5;
  return p;
}

namespace {

// Annuli between each upward crossing of 1/2 by the profile (inner radius:
// the last grid radius below 1/2, or the first radius when the profile starts
// above 1/2) and the next downward crossing.
std::vector<std::pair<double, double>> crossing_annuli(const GrowthProfile& p) {
  std::vector<std::pair<double, double>> out;
  const std::size_t n = p.ratios.size();
  for (std::size_t i = 0; i < n; ++i) {
    const bool up = i == 0 ? p.ratios[0] > 0.5 : (p.ratios[i - 1] <= 0.5 && p.ratios[i] > 0.5);
    if (!up) continue;
    std::size_t j = i + 1;
    while (j < n && p.ratios[j] >= 0.5) ++j;
    if (j == n) break;
    out.emplace_back(p.radii[i == 0 ? 0 : i - 1], p.radii[j]);
    i = j;
  }
  return out;
}

}  // namespace

HuntResult unbounded_fixed_point_hunt(const PotentialProblem& problem, int count, const GrowthProfile& profile,
                                      const MultiplicityOptions& options) {
  if (count < 1) throw UsageError("hunt count must be positive");
  if (profile.radii.empty()) throw PreconditionError("hunt needs a growth profile");
  HuntResult out;
  out.hypothesis_exhibited = profile.exhibits_alternation;
  out.regions.emplace_back(0.0, profile.radii.front());
  auto annuli = crossing_annuli(profile);
  if (annuli.empty()) {
    for (std::size_t i = 0; i + 1 < profile.radii.size(); ++i) annuli.emplace_back(profile.radii[i], profile.radii[i + 1]);
  }
  out.regions.insert(out.regions.end(), annuli.begin(), annuli.end());

  const FunctionalPair pair = problem.pair();
  const int dim = problem.dim();
  const Objective g = combination_of(pair.phi, 0.5, pair.psi);
  const Domain space = pair.domain();
  const SearchOptions search = with_min_starts(options.sublevel, 64).search;
  double last_norm = -1.0;
  int rejected = 0;
  for (const auto& [inner, outer] : out.regions) {
    if (static_cast<int>(out.records.size()) >= count) break;
    Region region{space, {LevelConstraint{pair.psi, inner > 0.0 ? inner * inner : -kInf, outer * outer}}};
    Vec witness = Vec::Zero(dim);
    witness[0] = 0.5 * (inner + outer);
    const Domain box = space.intersect(Domain::box(Vec::Constant(dim, -outer), Vec::Constant(dim, outer)));
    MultiStartResult r = minimize_multistart(g, region, box, witness, ConstraintMode::penalty, search);
    Vec x = r.x;
    if (!r.constraint_active) {
      LocalResult polished = minimize_box(g, x, space, search.local);
      const double nn = polished.x.norm();
      if (polished.value <= r.value && nn >= inner && nn <= outer) x = polished.x;
    }
    const Vec refined = newton_polish(problem, x);
    if (refined.norm() >= inner && refined.norm() <= outer) x = refined;
    const double norm = x.norm();
    const double res = problem.residual(x);
    const bool fixed = res <= kFixedPointTolRel * (1.0 + norm);
    const bool grows = last_norm <= 0.0 || norm >= 1.2 * last_norm;
    if (!fixed || !grows) {
      ++rejected;
      continue;
    }
    CriticalPointRecord rec;
    rec.x = x;
    rec.lambda = 0.5;
    rec.phi_val = pair.phi.value_unchecked(x);
    rec.psi_val = pair.psi.value_unchecked(x);
    rec.grad_norm = res;
    rec.kind = CriticalPointRecord::Kind::fixed_point;
    out.records.push_back(rec);
    last_norm = norm;
  }
  const int found = static_cast<int>(out.records.size());
  out.complete = found >= count && out.hypothesis_exhibited;
  out.diagnostic = std::to_string(found) + " of " + std::to_string(count) + " fixed points found; " +
                   std::to_string(rejected) + " region minimizers rejected";
  if (!out.hypothesis_exhibited) out.diagnostic += "; growth profile does not exhibit alternation across 1/2";
  return out;
}

}  // namespace varprin
