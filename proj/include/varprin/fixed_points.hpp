#pragma once

#include <string>
#include <vector>

#include "varprin/multiplicity.hpp"

namespace varprin {

/// A potential P whose gradient A = P' is the operator of interest. Fixed
/// points of A are the critical points of x -> ||x||^2/2 - P(x).
class PotentialProblem {
 public:
  explicit PotentialProblem(Functional potential);

  const Functional& potential() const { return potential_; }
  int dim() const { return potential_.dim(); }
  Vec apply(const Vec& x) const { return potential_.gradient_unchecked(x); }
  double residual(const Vec& x) const { return (apply(x) - x).norm(); }
  /// Phi = -P, Psi = ||x||^2.
  FunctionalPair pair() const { return hilbert_pair(potential_); }

 private:
  Functional potential_;
};

/// ||A(x) - x|| <= tol_fp_rel*(1+||x||).
inline constexpr double kFixedPointTolRel = 1e-8;

struct HilbertPhiResult {
  double value = 0.0;
  /// sup of P over the closed ball ||y||^2 <= rho and a maximizer.
  double sup_p = 0.0;
  Vec argsup;
  PhiResult phi;
};

/// inf over ||x||^2 < rho of (sup_{||y||^2<=rho} P(y) - P(x)) / (rho - ||x||^2).
/// The supremum uses at least 64 starts plus samples on the sphere.
HilbertPhiResult phi_rho_hilbert(const PotentialProblem& problem, double rho, const SublevelOptions& options = {});

/// sup of P over the closed ball of radius r with a maximizer.
std::pair<double, Vec> ball_supremum(const PotentialProblem& problem, double r, const SublevelOptions& options = {});

/// Fixed point of A with ||x||^2 < rho, from the minimizer of
/// ||x||^2/2 - P(x) over the ball. Requires phi_rho_hilbert < 1/2 - margin.
CriticalPointRecord fixed_point_in_ball(const PotentialProblem& problem, double rho,
                                        const MultiplicityOptions& options = {}, double margin = 1e-3);

struct GrowthProfile {
  std::vector<double> radii;
  /// sup_{||x||<=r} P(x) / r^2.
  std::vector<double> ratios;
  std::vector<Vec> argsup;
  /// min and max of ratios[j] over j >= i.
  std::vector<double> tail_min;
  std::vector<double> tail_max;
  /// Sign changes of ratio - 1/2 along the grid.
  int alternations = 0;
  /// Indices of local maxima of the ratio that lie above 1/2.
  std::vector<std::size_t> peaks;
  /// At least 3 alternations and the upper half of the grid has values on
  /// both sides of 1/2.
  bool exhibits_alternation = false;
};

std::vector<double> log_radii(double r_min, double r_max, int count);

GrowthProfile growth_profile(const PotentialProblem& problem, const std::vector<double>& r_grid,
                             const SublevelOptions& options = {});

struct HuntResult {
  std::vector<CriticalPointRecord> records;
  /// Inner and outer radius of every region searched.
  std::vector<std::pair<double, double>> regions;
  bool hypothesis_exhibited = false;
  bool complete = false;
  std::string diagnostic;
};

/// Fixed points of strictly increasing norm (consecutive ratio >= 1.2) from
/// minimizing ||x||^2/2 - P over the innermost ball and over the annuli
/// between upward and downward crossings of 1/2 by the growth profile.
HuntResult unbounded_fixed_point_hunt(const PotentialProblem& problem, int count, const GrowthProfile& profile,
                                      const MultiplicityOptions& options = {});

}  // namespace varprin
