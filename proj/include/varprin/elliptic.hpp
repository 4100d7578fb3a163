#pragma once

#include <optional>
#include <string>
#include <vector>

#include "varprin/multiplicity.hpp"
#include "varprin/thresholds.hpp"

namespace varprin {

/// 1D finite-difference model on (0,1) with homogeneous Dirichlet data:
///   -u'' = a|u|^{s-1}u + alpha + lambda (b|u|^{q-1}u - c u_+^p + beta).
struct EllipticConfig {
  int N = 64;
  double a = 0.0;
  double b = 1.0;
  double c = 1.0;
  double s = 0.5;
  double q = 2.0;
  double p = 3.0;
  /// Nodal samples of the sources at x_i = i*h, i = 1..N; empty means the
  /// constants below.
  Vec alpha_values;
  Vec beta_values;
  double alpha_constant = 1.0;
  double beta_constant = 1.0;

  double h() const { return 1.0 / (N + 1); }
  Vec alpha() const;
  Vec beta() const;
  /// Throws UsageError unless b, c > 0, 0 < s < 1, 1 < q < p, N >= 16 and the
  /// source samples have length N.
  void validate() const;
};

/// sum over the N+1 intervals of h*((u_{i+1} - u_i)/h)^2 with u_0 = u_{N+1} = 0.
double discrete_energy(const Vec& u, double h);

/// Phi_h(u) = c/(p+1) sum h u_+^{p+1} - b/(q+1) sum h |u|^{q+1} - sum h beta u
/// Psi_h(u) = energy(u)/2 - a/(s+1) sum h |u|^{s+1} - sum h alpha u
FunctionalPair assemble(const EllipticConfig& config);

/// -Lap_h u - a|u|^{s-1}u - alpha - lambda (b|u|^{q-1}u - c u_+^p + beta).
Vec pde_residual(const EllipticConfig& config, const Vec& u, double lambda);

/// Positive-part term c/(p+1) sum h u_+^{p+1} of Phi_h.
double positive_part_term(const EllipticConfig& config, const Vec& u);

struct EllipticThreshold {
  /// Minimum of phi over the sweep (estimate of mu*).
  double mu_star = 0.0;
  /// 1/mu_star; +infinity when mu_star is (numerically) zero.
  double lambda_star = 0.0;
  bool all_lambda_admissible = false;
  double rho_at_min = 0.0;
  EstimateDirection direction = EstimateDirection::lower;
  RatioCurve curve_up;
  RatioCurve curve_down;
};

struct EllipticGrids {
  GridSpec up{GridKind::geometric_up, 1.0, 4};
  GridSpec down{GridKind::geometric_down_to_infimum, 1.0, 8};
};

/// Fewer starts than the default: the discrete functionals have few basins
/// and dimension N makes every local solve expensive.
SublevelOptions elliptic_sublevel_options();

EllipticThreshold threshold_lambda_star(const EllipticConfig& config, const EllipticGrids& grids = {},
                                        const SublevelOptions& options = elliptic_sublevel_options());

struct EllipticSolution {
  Vec u;
  double lambda = 0.0;
  double mu = 0.0;
  double rho = 0.0;
  double residual_inf = kInf;
  int newton_iterations = 0;
  /// Gradient norm of Phi_h + mu Psi_h at the sublevel minimizer, before Newton.
  std::optional<double> minimizer_grad_norm;
  std::string note;
};

/// Residual tolerance for solve.
inline constexpr double kPdeTol = 1e-8;

/// Critical point of Psi_h + lambda Phi_h: restricted minimizer of
/// Phi_h + (1/lambda) Psi_h at the level realizing the threshold, polished by
/// Newton's method on the residual.
EllipticSolution solve(const EllipticConfig& config, double lambda, const EllipticThreshold& threshold,
                       const SublevelOptions& options = elliptic_sublevel_options());

/// Newton's method on the residual from u0 (tridiagonal Jacobian).
EllipticSolution newton_solve(const EllipticConfig& config, double lambda, const Vec& u0, int max_iterations = 50);

struct RayProbe {
  std::vector<double> t;
  std::vector<double> values;
  bool passed = false;
};

struct UnboundednessReport {
  double lambda = 0.0;
  /// Along -t|d|: values fall below -1e6.
  RayProbe below;
  /// Along +t|d|: values exceed +1e6.
  RayProbe above;
  /// b = 0 removes the mechanism for unboundedness below.
  bool mechanism_absent = false;
};

UnboundednessReport unbounded_below_probe(const EllipticConfig& config, double lambda, const Vec& direction);

/// Hat function peaking at the midpoint.
Vec hat_function(int N);

}  // namespace varprin
