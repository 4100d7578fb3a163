#pragma once

#include <string>
#include <vector>

#include "varprin/sublevel.hpp"

namespace varprin {

struct MultiplicityOptions {
  SublevelOptions sublevel;
  /// Records closer than this are the same point.
  double tol_sep = 1e-6;
  /// Critical when the gradient norm is <= tol_crit_rel*(1+|value|).
  double tol_crit_rel = 1e-8;
  /// Consecutive accepted Psi values must shrink (or grow) by this factor.
  double trend_factor = 1.5;
  int trend_length = 3;
  std::vector<double> eps_schedule = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  int probe_directions = 64;
};

enum class Branch { global_min_found, escaping_sequence, converging_sequence, zero_is_local_min, inconclusive };

std::string to_string(Branch b);

struct SequenceEntry {
  double rho = 0.0;
  CriticalPointRecord record;
  /// Psi(x) < rho by more than the boundary tolerance.
  bool interior = false;
  bool critical = false;
  /// Differs (by tol_sep) from every earlier accepted record.
  bool distinct = false;
  std::string note;
};

struct MinimaSequence {
  double lambda = 0.0;
  std::vector<double> schedule;
  std::vector<SequenceEntry> entries;
  Branch branch = Branch::inconclusive;
  std::string diagnostic;

  /// Interior critical records that are pairwise distinct.
  std::vector<CriticalPointRecord> distinct_critical() const;
};

/// rho_n = inf_psi + 4^-n (rho0 - inf_psi), n = 0..n_max.
std::vector<double> descending_schedule(double inf_psi, double rho0 = 1.0, int n_max = 10);
/// rho_n = rho0 * 4^n, n = 0..n_max.
std::vector<double> ascending_schedule(double rho0 = 1.0, int n_max = 10);

/// Restricted global minimizer of Phi + lambda*Psi over {Psi < rho}: the lower
/// of the constructive and the direct minimizer. Requires lambda > phi(rho)
/// up to the sublevel root tolerance.
CriticalPointRecord sublevel_critical_point(const SublevelProblem& problem, double lambda,
                                            const MultiplicityOptions& options = {},
                                            const std::vector<Vec>& warm_starts = {});

/// Minimizers on shrinking levels, classified as converging_sequence,
/// zero_is_local_min or inconclusive.
MinimaSequence descending_sequence(const FunctionalPair& pair, double lambda, const std::vector<double>& schedule,
                                   const MultiplicityOptions& options = {});

/// Minimizers on growing levels, classified as global_min_found,
/// escaping_sequence or inconclusive.
MinimaSequence ascending_alternative(const FunctionalPair& pair, double lambda, const std::vector<double>& schedule,
                                     const MultiplicityOptions& options = {});

/// True iff no point sampled uniformly in the balls of radius eps around x
/// (probe_directions samples per eps) has a value below
/// value(x) - 1e-12*(1+|value(x)|).
bool is_local_min_probe(const FunctionalPair& pair, double lambda, const Vec& x,
                        const std::vector<double>& eps_schedule, std::uint64_t seed = 0, int samples = 64);

}  // namespace varprin
