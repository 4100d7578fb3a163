#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "varprin/functional.hpp"
#include "varprin/local_search.hpp"

namespace varprin {

/// lower <= psi(x) <= upper.
struct LevelConstraint {
  Functional psi;
  double lower = -kInf;
  double upper = kInf;
};

/// {x in box : every level constraint holds}.
struct Region {
  Domain box;
  std::vector<LevelConstraint> constraints;

  /// Largest violation of any level constraint (0 when feasible); box
  /// membership is checked separately.
  double violation(const Vec& x) const;
  bool feasible(const Vec& x, double tol = 0.0) const { return box.contains(x) && violation(x) <= tol; }
};

struct SearchOptions {
  int starts = 32;
  std::uint64_t seed = 0;
  /// Dense pre-scan size for one-dimensional problems (0 disables it).
  int grid_1d = 4096;
  std::vector<double> penalty_weights = {1e3, 1e4, 1e5, 1e6, 1e7};
  /// Feasibility tolerance: violation <= tol_boundary_rel*(1+|level|).
  double tol_boundary_rel = 1e-8;
  LocalOptions local;
};

enum class ConstraintMode {
  /// Constraints enforced by escalating quadratic penalties plus a final
  /// restoration step back onto the region.
  penalty,
  /// The objective returns +inf outside the region; starts must be admissible.
  barrier,
};

struct StartOutcome {
  Vec x;
  double value = kInf;
  bool feasible = false;
  double projected_gradient_norm = kInf;
};

struct MultiStartResult {
  Vec x;
  double value = kInf;
  int starts_used = 0;
  int best_start_index = -1;
  bool constraint_active = false;
  double projected_gradient_norm = kInf;
  std::vector<StartOutcome> outcomes;
};

/// Finite box enclosing the region, found by doubling probes from the witness
/// along coordinate and seeded random directions. Unconstrained regions use
/// `fallback_radius` around the witness.
Domain enclosing_box(const Region& region, const Vec& witness, std::uint64_t seed, double fallback_radius = 10.0);

/// Deterministic start points: the 1D grid pre-scan minima (for dim 1), then
/// low-discrepancy points in the sampling box. In barrier mode infeasible
/// samples are pulled toward the witness until admissible.
std::vector<Vec> generate_starts(const Objective& objective, const Region& region, const Domain& sampling_box,
                                 const Vec& witness, ConstraintMode mode, const SearchOptions& options);

/// Multi-start global minimization over a region. The result is the argmin
/// over all starts with ties broken by the lowest start index.
MultiStartResult minimize_multistart(const Objective& objective, const Region& region, const Domain& sampling_box,
                                     const Vec& witness, ConstraintMode mode, const SearchOptions& options,
                                     const std::vector<Vec>& warm_starts = {});

/// Moves an infeasible point back into the region along the gradient of the
/// violated constraint (bisection on the step). Returns nullopt if it fails.
std::optional<Vec> restore_feasibility(const Region& region, const Vec& x, double tol);

/// Objective built from a functional (analytic gradient or central differences).
Objective objective_of(const Functional& f);
/// Objective of f + lambda*g.
Objective combination_of(const Functional& f, double lambda, const Functional& g);

}  // namespace varprin
