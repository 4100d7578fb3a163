#pragma once

#include <optional>

#include "varprin/builtins.hpp"
#include "varprin/multistart.hpp"
#include "varprin/records.hpp"

namespace varprin {

struct SublevelOptions {
  SearchOptions search;
  /// Ratios are restricted to Psi(x) <= rho - tol_strict_rel*(1+|rho|).
  double tol_strict_rel = 1e-10;
  /// Ratio minimizers with rho - Psi(x) <= boundary_band_rel*(1+|rho|) are
  /// treated as approaching the level set.
  double boundary_band_rel = 1e-6;
  /// |beta(r0) + lambda| <= tol_root_rel*(1+lambda).
  double tol_root_rel = 1e-10;
  /// Constructive vs direct minimizer agreement, relative to 1+|value|.
  double tol_cross_rel = 1e-6;
  int max_doublings = 200;
};

/// Estimated infimum of Psi over the domain with an attaining point.
struct PsiInfimum {
  double value = 0.0;
  Vec argmin;
};

/// Unconstrained multi-start minimization of psi over the domain.
PsiInfimum estimate_inf_psi(const Functional& psi, const Domain& domain, const SearchOptions& options);

/// A pair (Phi, Psi) together with a level rho; the admissible region is the
/// sublevel set {Psi < rho} intersected with the domain.
class SublevelProblem {
 public:
  /// Validates the pair (Psi must be flagged coercive) and that rho exceeds
  /// the estimated infimum of Psi. The argmin of Psi is stored as witness.
  SublevelProblem(FunctionalPair pair, double rho, const SublevelOptions& options = {});
  SublevelProblem(FunctionalPair pair, double rho, PsiInfimum inf_psi, const SublevelOptions& options = {});

  const FunctionalPair& pair() const { return pair_; }
  const Functional& phi() const { return pair_.phi; }
  const Functional& psi() const { return pair_.psi; }
  double rho() const { return rho_; }
  int dim() const { return pair_.dim(); }
  const Domain& domain() const { return domain_; }
  const Vec& witness() const { return inf_psi_.argmin; }
  const PsiInfimum& inf_psi() const { return inf_psi_; }

  /// {Psi <= rho - shrink} within the domain.
  Region region(double shrink = 0.0) const;
  /// Finite box enclosing {Psi <= rho}.
  const Domain& sampling_box() const { return sampling_box_; }

 private:
  void validate(const SublevelOptions& options);

  FunctionalPair pair_;
  double rho_;
  Domain domain_;
  PsiInfimum inf_psi_;
  Domain sampling_box_;
};

struct MinimizeResult {
  Vec x;
  double value = 0.0;
  int starts_used = 0;
  int best_start_index = -1;
  /// Psi(x) within the boundary tolerance of rho.
  bool constraint_active = false;
  EstimateDirection estimate = EstimateDirection::upper;
};

/// Infimum of Phi over {Psi <= rho}; a multi-start value, hence an upper
/// estimate of the true infimum.
MinimizeResult alpha(const SublevelProblem& problem, const SublevelOptions& options = {});

struct PhiResult {
  double value = 0.0;
  MinimizeResult alpha;
  /// Best interior point of the ratio search.
  Vec x;
  double interior_value = kInf;
  /// Limit of the ratio along the inward normal at the alpha minimizer, when
  /// that minimizer lies on the level set.
  std::optional<double> boundary_limit;
  bool attained_in_interior = true;
};

/// inf over {Psi < rho} of (Phi(x) - alpha(rho)) / (rho - Psi(x)).
PhiResult phi_of_rho(const SublevelProblem& problem, const SublevelOptions& options = {});
/// Same ratio infimum for a precomputed alpha (value and minimizer).
PhiResult phi_of_rho(const SublevelProblem& problem, MinimizeResult alpha, const SublevelOptions& options);

struct BetaResult {
  double value = 0.0;
  Vec x;
  double r = 0.0;
};

/// sup over {Psi < rho} of (Phi(x) + r) / (Psi(x) - rho) with an attaining
/// point. Requires r > -alpha(rho).
BetaResult beta(const SublevelProblem& problem, double r, const SublevelOptions& options = {});
BetaResult beta(const SublevelProblem& problem, double r, const MinimizeResult& alpha, const SublevelOptions& options,
                const std::vector<Vec>& warm_starts = {});

struct RootResult {
  double r0 = 0.0;
  BetaResult beta;
  int evaluations = 0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

/// Root r0 > -alpha of beta(r) = -lambda; requires lambda > phi(rho).
RootResult solve_r0(const SublevelProblem& problem, double lambda, const SublevelOptions& options = {});
RootResult solve_r0(const SublevelProblem& problem, double lambda, const PhiResult& phi, const SublevelOptions& options);

struct ConstructiveResult {
  CriticalPointRecord record;
  RootResult root;
  PhiResult phi;
  /// Direct multi-start minimum of Phi + lambda*Psi over {Psi <= rho}.
  MinimizeResult direct;
  double discrepancy = 0.0;
};

/// Global minimizer of Phi + lambda*Psi over {Psi < rho}, obtained as the
/// attaining point of beta at r0 and cross-checked against direct
/// minimization.
ConstructiveResult constructive_minimizer(const SublevelProblem& problem, double lambda,
                                          const SublevelOptions& options = {});

/// Direct multi-start minimization of Phi + lambda*Psi over {Psi <= rho}.
MinimizeResult minimize_combination(const SublevelProblem& problem, double lambda, const SublevelOptions& options,
                                    const std::vector<Vec>& warm_starts = {});

/// Box-projected gradient norm of Phi + lambda*Psi at x (empty without gradients).
std::optional<double> combination_grad_norm(const FunctionalPair& pair, double lambda, const Vec& x,
                                            const Domain& domain);

}  // namespace varprin
