#include "varprin/multistart.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "varprin/errors.hpp"
#include "varprin/parallel.hpp"
#include "varprin/random.hpp"

namespace varprin {

double Region::violation(const Vec& x) const {
  double v = 0.0;
  for (const auto& c : constraints) {
    const double p = c.psi.value_unchecked(x);
    if (p > c.upper) v = std::max(v, p - c.upper);
    if (p < c.lower) v = std::max(v, c.lower - p);
    if (std::isnan(p)) v = kInf;
  }
  return v;
}

Objective objective_of(const Functional& f) {
  return [f](const Vec& x, Vec* grad) {
    if (grad) *grad = f.gradient_or_fd(x);
    return f.value_unchecked(x);
  };
}

Objective combination_of(const Functional& f, double lambda, const Functional& g) {
  return [f, lambda, g](const Vec& x, Vec* grad) {
    if (grad) *grad = f.gradient_or_fd(x) + lambda * g.gradient_or_fd(x);
    return f.value_unchecked(x) + lambda * g.value_unchecked(x);
  };
}

namespace {

// The region is unconstrained along d beyond radius r if no upper-bounded
// level constraint is violated there.
bool outside_along(const Region& region, const Vec& x) {
  for (const auto& c : region.constraints) {
    if (std::isfinite(c.upper) && c.psi.value_unchecked(x) > c.upper) return true;
  }
  return false;
}

bool has_upper_constraint(const Region& region) {
  return std::any_of(region.constraints.begin(), region.constraints.end(),
                     [](const LevelConstraint& c) { return std::isfinite(c.upper); });
}

}  // namespace

Domain enclosing_box(const Region& region, const Vec& witness, std::uint64_t seed, double fallback_radius) {
  const int n = static_cast<int>(witness.size());
  Vec lo = region.box.lower();
  Vec hi = region.box.upper();
  if (!has_upper_constraint(region)) {
    Vec blo = (witness.array() - fallback_radius).matrix().cwiseMax(lo);
    Vec bhi = (witness.array() + fallback_radius).matrix().cwiseMin(hi);
    return Domain::box(blo, bhi);
  }
  std::vector<Vec> dirs;
  for (int i = 0; i < n; ++i) {
    dirs.push_back(Vec::Unit(n, i));
    dirs.push_back(-Vec::Unit(n, i));
  }
  Rng rng(seed, 0xb0c5);
  const int random_dirs = std::max(8, 4 * n);
  for (int k = 0; k < random_dirs; ++k) dirs.push_back(rng.unit_vector(n));

  Vec ext_lo = witness;
  Vec ext_hi = witness;
  for (const Vec& d : dirs) {
    double r = 1e-8 * (1.0 + witness.lpNorm<Eigen::Infinity>());
    Vec x = witness;
    int k = 0;
    for (; k < 200; ++k) {
      x = region.box.project(witness + r * d);
      if (outside_along(region, x)) break;
      // Stuck on the domain boundary: nothing further along this direction.
      if ((x - witness).norm() < 0.5 * r) break;
      r *= 2.0;
    }
    if (k == 200) throw PreconditionError("enclosing_box: region appears unbounded (is the level functional coercive?)");
    ext_lo = ext_lo.cwiseMin(x);
    ext_hi = ext_hi.cwiseMax(x);
  }
  // Margin for directions the probes missed.
  Vec half = 0.25 * (ext_hi - ext_lo);
  Vec blo = (ext_lo - half).cwiseMax(lo);
  Vec bhi = (ext_hi + half).cwiseMin(hi);
  for (int i = 0; i < n; ++i) {
    if (!(bhi[i] > blo[i])) {
      blo[i] = std::max(lo[i], witness[i] - 1e-12);
      bhi[i] = std::min(hi[i], witness[i] + 1e-12);
    }
  }
  return Domain::box(blo, bhi);
}

namespace {

bool admissible(const Objective& objective, const Region& region, const Vec& x, ConstraintMode mode) {
  if (!region.feasible(x)) return false;
  if (mode == ConstraintMode::barrier) return std::isfinite(objective(x, nullptr));
  return true;
}

std::vector<Vec> grid_prescan_1d(const Objective& objective, const Region& region, const Domain& box,
                                 ConstraintMode mode, int points, int keep) {
  const double a = box.lower()[0];
  const double b = box.upper()[0];
  std::vector<double> xs(points), vals(points, kInf);
  for (int j = 0; j < points; ++j) {
    xs[j] = points == 1 ? a : a + (b - a) * static_cast<double>(j) / (points - 1);
    Vec x = Vec::Constant(1, xs[j]);
    if (!region.feasible(x)) continue;
    const double v = objective(x, nullptr);
    if (std::isfinite(v)) vals[j] = v;
  }
  (void)mode;
  std::vector<int> minima;
  for (int j = 0; j < points; ++j) {
    if (!std::isfinite(vals[j])) continue;
    const double left = j > 0 ? vals[j - 1] : kInf;
    const double right = j + 1 < points ? vals[j + 1] : kInf;
    if (vals[j] <= left && vals[j] <= right) minima.push_back(j);
  }
  std::stable_sort(minima.begin(), minima.end(), [&](int p, int q) { return vals[p] < vals[q]; });
  if (static_cast<int>(minima.size()) > keep) minima.resize(keep);
  std::vector<Vec> out;
  for (int j : minima) out.push_back(Vec::Constant(1, xs[j]));
  return out;
}

}  // namespace

std::vector<Vec> generate_starts(const Objective& objective, const Region& region, const Domain& sampling_box,
                                 const Vec& witness, ConstraintMode mode, const SearchOptions& options) {
  const int n = static_cast<int>(witness.size());
  std::vector<Vec> starts;
  if (n == 1 && options.grid_1d > 0) {
    starts = grid_prescan_1d(objective, region, sampling_box, mode, options.grid_1d, options.starts);
  }
  const int target = options.starts;
  HaltonSequence halton(n, options.seed);
  Rng rng(options.seed, 0x5a);
  std::vector<Vec> infeasible;
  const Vec lo = sampling_box.lower();
  const Vec span = sampling_box.upper() - lo;
  const bool witness_ok = admissible(objective, region, witness, mode);
  const int max_tries = 8 * std::max(target, 1);
  for (int k = 0; k < max_tries && static_cast<int>(starts.size()) < target; ++k) {
    Vec p = lo + halton.point(static_cast<std::uint64_t>(k)).cwiseProduct(span);
    const double shrink = 0.05 + 0.95 * rng.uniform();
    if (admissible(objective, region, p, mode)) {
      starts.push_back(std::move(p));
      continue;
    }
    if (mode == ConstraintMode::barrier) {
      if (!witness_ok) continue;
      // Largest admissible fraction of the segment from the witness.
      double t_ok = 0.0, t_bad = 1.0;
      for (int it = 0; it < 50; ++it) {
        const double t = 0.5 * (t_ok + t_bad);
        if (admissible(objective, region, witness + t * (p - witness), mode))
          t_ok = t;
        else
          t_bad = t;
      }
      Vec q = witness + shrink * t_ok * (p - witness);
      if (admissible(objective, region, q, mode)) starts.push_back(std::move(q));
    } else {
      infeasible.push_back(std::move(p));
    }
  }
  for (std::size_t k = 0; k < infeasible.size() && static_cast<int>(starts.size()) < target; ++k) {
    starts.push_back(infeasible[k]);
  }
  return starts;
}

std::optional<Vec> restore_feasibility(const Region& region, const Vec& start, double tol) {
  (void)tol;
  Vec x = region.box.project(start);
  for (int pass = 0; pass < 4; ++pass) {
    const LevelConstraint* worst = nullptr;
    double worst_v = 0.0;
    bool upper_side = true;
    for (const auto& c : region.constraints) {
      const double p = c.psi.value_unchecked(x);
      if (p - c.upper > worst_v) {
        worst_v = p - c.upper;
        worst = &c;
        upper_side = true;
      }
      if (c.lower - p > worst_v) {
        worst_v = c.lower - p;
        worst = &c;
        upper_side = false;
      }
    }
    if (!worst) return x;
    const Vec g = worst->psi.gradient_or_fd(x);
    const double gg = g.squaredNorm();
    if (!(gg > 0.0)) return std::nullopt;
    const Vec dir = upper_side ? Vec(-g) : Vec(g);
    auto ok = [&](double t) {
      const double p = worst->psi.value_unchecked(region.box.project(x + t * dir));
      return upper_side ? p <= worst->upper : p >= worst->lower;
    };
    double t_hi = worst_v / gg;
    int k = 0;
    while (!ok(t_hi) && k < 80) {
      t_hi *= 2.0;
      ++k;
    }
    if (!ok(t_hi)) return std::nullopt;
    double t_lo = 0.0;
    for (int it = 0; it < 200 && t_hi - t_lo > 0.0; ++it) {
      const double t = 0.5 * (t_lo + t_hi);
      if (t == t_lo || t == t_hi) break;
      if (ok(t))
        t_hi = t;
      else
        t_lo = t;
    }
    x = region.box.project(x + t_hi * dir);
  }
  if (region.violation(x) <= 0.0) return x;
  return std::nullopt;
}

namespace {

double boundary_tol(const SearchOptions& options, double level) {
  return options.tol_boundary_rel * (1.0 + std::abs(level));
}

bool feasible_within_tol(const Region& region, const Vec& x, const SearchOptions& options) {
  if (!region.box.contains(x)) return false;
  for (const auto& c : region.constraints) {
    const double p = c.psi.value_unchecked(x);
    if (std::isfinite(c.upper) && p > c.upper + boundary_tol(options, c.upper)) return false;
    if (std::isfinite(c.lower) && p < c.lower - boundary_tol(options, c.lower)) return false;
    if (std::isnan(p)) return false;
  }
  return true;
}

StartOutcome run_penalty(const Objective& objective, const Region& region, const Vec& start,
                         const SearchOptions& options) {
  Vec x = region.box.project(start);
  for (double w : options.penalty_weights) {
    Objective penalized = [&](const Vec& y, Vec* grad) {
      double v = objective(y, grad);
      for (const auto& c : region.constraints) {
        const double p = c.psi.value_unchecked(y);
        double excess = 0.0;
        if (p > c.upper) excess = p - c.upper;
        if (p < c.lower) excess = p - c.lower;
        if (excess != 0.0) {
          v += w * excess * excess;
          if (grad) *grad += 2.0 * w * excess * c.psi.gradient_or_fd(y);
        }
      }
      return v;
    };
    LocalResult r = minimize_box(penalized, x, region.box, options.local);
    if (!std::isfinite(r.value)) break;
    x = r.x;
    if (region.violation(x) == 0.0) break;
  }
  StartOutcome out;
  if (region.violation(x) > 0.0) {
    auto restored = restore_feasibility(region, x, 0.0);
    if (restored) x = *restored;
  }
  out.x = x;
  Vec g(x.size());
  out.value = objective(x, &g);
  out.feasible = std::isfinite(out.value) && feasible_within_tol(region, x, options);
  out.projected_gradient_norm = projected_gradient(x, g, region.box).lpNorm<Eigen::Infinity>();
  return out;
}

StartOutcome run_barrier(const Objective& objective, const Region& region, const Vec& start,
                         const SearchOptions& options) {
  StartOutcome out;
  LocalResult r = minimize_box(objective, start, region.box, options.local);
  out.x = r.x;
  out.value = r.value;
  out.projected_gradient_norm = r.projected_gradient_norm;
  out.feasible = std::isfinite(r.value) && region.feasible(r.x);
  return out;
}

}  // namespace

MultiStartResult minimize_multistart(const Objective& objective, const Region& region, const Domain& sampling_box,
                                     const Vec& witness, ConstraintMode mode, const SearchOptions& options,
                                     const std::vector<Vec>& warm_starts) {
  std::vector<Vec> starts;
  for (const Vec& w : warm_starts) {
    Vec p = region.box.project(w);
    if (mode == ConstraintMode::barrier && !admissible(objective, region, p, mode)) continue;
    starts.push_back(std::move(p));
  }
  if (admissible(objective, region, witness, mode)) starts.push_back(witness);
  for (Vec& s : generate_starts(objective, region, sampling_box, witness, mode, options)) starts.push_back(std::move(s));
  if (starts.empty()) throw InfeasibleError("multistart: no admissible start point in the region");

  MultiStartResult result;
  result.outcomes.resize(starts.size());
  parallel_for(starts.size(), [&](std::size_t i) {
    result.outcomes[i] = mode == ConstraintMode::penalty ? run_penalty(objective, region, starts[i], options)
                                                         : run_barrier(objective, region, starts[i], options);
  });
  result.starts_used = static_cast<int>(starts.size());
  for (std::size_t i = 0; i < result.outcomes.size(); ++i) {
    const auto& o = result.outcomes[i];
    if (!o.feasible) continue;
    if (result.best_start_index < 0 || o.value < result.value) {
      result.value = o.value;
      result.best_start_index = static_cast<int>(i);
    }
  }
  if (result.best_start_index < 0) throw InfeasibleError("multistart: no start converged to a feasible point");
  const auto& best = result.outcomes[static_cast<std::size_t>(result.best_start_index)];
  result.x = best.x;
  result.projected_gradient_norm = best.projected_gradient_norm;
  if (result.value < -1e150) throw UnboundedBelowError("multistart: objective diverges to -infinity", result.x);
  for (const auto& c : region.constraints) {
    const double p = c.psi.value_unchecked(result.x);
    if (std::isfinite(c.upper) && p >= c.upper - boundary_tol(options, c.upper)) result.constraint_active = true;
    if (std::isfinite(c.lower) && p <= c.lower + boundary_tol(options, c.lower)) result.constraint_active = true;
  }
  return result;
}

}  // namespace varprin
