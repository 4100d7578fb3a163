#pragma once

#include <optional>
#include <string>
#include <vector>

#include "varprin/sublevel.hpp"

namespace varprin {

enum class GridKind { geometric_up, geometric_down_to_infimum };

std::string to_string(GridKind kind);

/// Upward: rho_k = rho0 * 2^k. Downward: rho_k = inf_psi + (rho0 - inf_psi) * 2^-k.
/// k = 0..K in both cases.
struct GridSpec {
  GridKind kind = GridKind::geometric_up;
  double rho0 = 1.0;
  int K = 12;
};

std::vector<double> make_grid(const GridSpec& spec, double inf_psi);

struct RatioCurve {
  GridKind grid_kind = GridKind::geometric_up;
  std::vector<double> rho_grid;
  /// NaN at gaps.
  std::vector<double> phi_values;
  std::vector<double> alpha_values;
  /// Minimizers of the ratio and of Phi at each level (empty at gaps).
  std::vector<Vec> ratio_argmins;
  std::vector<Vec> alpha_argmins;
  /// Empty string where the grid point succeeded.
  std::vector<std::string> gaps;
  PsiInfimum inf_psi;

  std::size_t size() const { return rho_grid.size(); }
  bool has_value(std::size_t i) const { return gaps[i].empty(); }
};

/// phi(rho) and alpha(rho) on every grid level. Failing levels become gaps.
RatioCurve sweep(const FunctionalPair& pair, const GridSpec& grid, const SublevelOptions& options = {});

/// Values above this are reported as +infinity.
inline constexpr double kInfinityCap = 1e12;

struct ThresholdEstimate {
  double value = 0.0;
  EstimateDirection direction = EstimateDirection::upper;
  /// The sampled head values grow steadily toward the limit point.
  bool diverging = false;
  std::string note;
};

ThresholdEstimate lambda_star(const RatioCurve& curve);
/// Running minimum over the upper half of a geometric_up curve with >= 8 points.
ThresholdEstimate gamma_estimate(const RatioCurve& curve);
/// Running minimum over the half of a geometric_down curve closest to inf Psi.
ThresholdEstimate delta_estimate(const RatioCurve& curve);

struct ThresholdReport {
  ThresholdEstimate lambda_star;
  std::optional<ThresholdEstimate> gamma;
  std::optional<ThresholdEstimate> delta;
  RatioCurve curve;
  std::optional<RatioCurve> curve_down;
  std::string config_digest;
};

struct IdentityReport {
  double left = 0.0;
  double right = 0.0;
  double gap = 0.0;
  bool passed = false;
  std::vector<double> r_grid;
  /// inf over x of (Phi + r)/(rho - Psi) for each r (NaN where beta failed).
  std::vector<double> inner_values;
};

/// Compares phi(rho) with the infimum over r > -alpha of
/// inf_x (Phi(x) + r)/(rho - Psi(x)), the latter on a log-spaced r grid.
IdentityReport proof_identity_check(const SublevelProblem& problem, const SublevelOptions& options = {},
                                    int r_points = 16);

struct DichotomyReport {
  double lambda_star = 0.0;
  double lambda_above = 0.0;
  bool minimum_found = false;
  Vec minimizer;
  double minimum_value = 0.0;
  double box_radius = 0.0;

  std::optional<double> mu_below;
  bool escape_detected = false;
  bool values_decreasing = false;
  double escape_norm = 0.0;
  std::vector<double> escape_values;
  int escape_iterations = 0;
  bool inconclusive = false;
  std::string note;
};

/// Global minimum of f over the domain via multi-start searches in boxes of
/// radius 10, 100, ... until the argmin is strictly inside the box.
struct BoxMinimum {
  bool found = false;
  Vec x;
  double value = kInf;
  double radius = 0.0;
};
BoxMinimum expanding_box_minimum(const Objective& f, const Domain& domain, const SearchOptions& options,
                                 int max_expansions = 6);

struct EscapeProbe {
  bool escaped = false;
  bool values_decreasing = true;
  double final_norm = 0.0;
  std::vector<double> values;
  int iterations = 0;
};
/// Step-doubling projected descent from the projected origin until the
/// iterate norm reaches `radius`.
EscapeProbe escape_probe(const Objective& f, const Domain& domain, double radius = 1e6, int max_iterations = 5000);

/// Convex pairs: at lambda_above a global minimizer exists, at mu_below
/// descent escapes to infinity.
DichotomyReport convex_dichotomy_check(const FunctionalPair& pair, const RatioCurve& curve,
                                       std::optional<double> mu_below, double lambda_above,
                                       const SublevelOptions& options = {}, double escape_radius = 1e6);

}  // namespace varprin
