#include "varprin/multiplicity.hpp"

#include <cmath>

#include "varprin/errors.hpp"
#include "varprin/random.hpp"
#include "varprin/thresholds.hpp"

namespace varprin {

std::string to_string(Branch b) {
  switch (b) {
    case Branch::global_min_found: return "global_min_found";
    case Branch::escaping_sequence: return "escaping_sequence";
    case Branch::converging_sequence: return "converging_sequence";
    case Branch::zero_is_local_min: return "zero_is_local_min";
    case Branch::inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::vector<CriticalPointRecord> MinimaSequence::distinct_critical() const {
  std::vector<CriticalPointRecord> out;
  for (const auto& e : entries) {
    if (e.distinct) out.push_back(e.record);
  }
  return out;
}

std::vector<double> descending_schedule(double inf_psi, double rho0, int n_max) {
  std::vector<double> s;
  for (int n = 0; n <= n_max; ++n) s.push_back(inf_psi + std::pow(4.0, -n) * (rho0 - inf_psi));
  return s;
}

std::vector<double> ascending_schedule(double rho0, int n_max) {
  std::vector<double> s;
  for (int n = 0; n <= n_max; ++n) s.push_back(rho0 * std::pow(4.0, n));
  return s;
}

namespace {

CriticalPointRecord make_record(const FunctionalPair& pair, double lambda, const Vec& x, const Domain& domain) {
  CriticalPointRecord rec;
  rec.x = x;
  rec.lambda = lambda;
  rec.phi_val = pair.phi.value_unchecked(x);
  rec.psi_val = pair.psi.value_unchecked(x);
  rec.grad_norm = combination_grad_norm(pair, lambda, x, domain);
  return rec;
}

// Unconstrained local descent from an interior point; kept only if it stays
// inside the open sublevel set and does not raise the value.
Vec polish(const SublevelProblem& problem, double lambda, const Vec& x, const SublevelOptions& options) {
  const Objective f = combination_of(problem.phi(), lambda, problem.psi());
  LocalResult r = minimize_box(f, x, problem.domain(), options.search.local);
  if (r.value <= f(x, nullptr) && problem.psi().value_unchecked(r.x) < problem.rho()) return r.x;
  return x;
}

bool is_interior(const SublevelProblem& p, const Vec& x, const SublevelOptions& options) {
  return p.psi().value_unchecked(x) < p.rho() - options.search.tol_boundary_rel * (1.0 + std::abs(p.rho()));
}

}  // namespace

CriticalPointRecord sublevel_critical_point(const SublevelProblem& problem, double lambda,
                                            const MultiplicityOptions& options, const std::vector<Vec>& warm_starts) {
  const SublevelOptions& s = options.sublevel;
  PhiResult phi = phi_of_rho(problem, s);
  const double slack = s.tol_root_rel * (1.0 + std::abs(lambda));
  if (lambda < phi.value - slack) {
    throw PreconditionError("lambda = " + std::to_string(lambda) + " is below phi(rho) = " + std::to_string(phi.value));
  }
  const Objective f = combination_of(problem.phi(), lambda, problem.psi());
  std::vector<Vec> warm = warm_starts;
  Vec best;
  double best_value = kInf;
  if (lambda > phi.value) {
    try {
      RootResult root = solve_r0(problem, lambda, phi, s);
      best = root.beta.x;
      best_value = f(best, nullptr);
      warm.push_back(best);
    } catch (const NumericalError&) {
    }
  }
  MinimizeResult direct = minimize_combination(problem, lambda, s, warm);
  if (direct.value < best_value) {
    best = direct.x;
    best_value = direct.value;
  }
  if (is_interior(problem, best, s)) best = polish(problem, lambda, best, s);
  CriticalPointRecord rec = make_record(problem.pair(), lambda, best, problem.domain());
  rec.kind = CriticalPointRecord::Kind::sublevel_global;
  return rec;
}

namespace {

MinimaSequence run_levels(const FunctionalPair& pair, double lambda, const std::vector<double>& schedule,
                          const MultiplicityOptions& options, PsiInfimum& inf_psi) {
  MinimaSequence seq;
  seq.lambda = lambda;
  seq.schedule = schedule;
  const SublevelOptions& s = options.sublevel;
  inf_psi = estimate_inf_psi(pair.psi, pair.domain(), s.search);
  std::vector<Vec> accepted;
  std::vector<Vec> warm;
  for (double rho : schedule) {
    SequenceEntry e;
    e.rho = rho;
    try {
      SublevelProblem problem(pair, rho, inf_psi, s);
      try {
        e.record = sublevel_critical_point(problem, lambda, options, warm);
      } catch (const PreconditionError& err) {
        e.note = std::string("direct minimization only: ") + err.what();
        MinimizeResult d = minimize_combination(problem, lambda, s, warm);
        Vec x = is_interior(problem, d.x, s) ? polish(problem, lambda, d.x, s) : d.x;
        e.record = make_record(pair, lambda, x, problem.domain());
      }
      e.record.kind = CriticalPointRecord::Kind::local_min;
      e.interior = is_interior(problem, e.record.x, s);
      const double tol_crit = options.tol_crit_rel * (1.0 + std::abs(e.record.value()));
      e.critical = !e.record.grad_norm || *e.record.grad_norm <= tol_crit;
      if (e.interior && e.critical) {
        bool fresh = true;
        for (const Vec& a : accepted) fresh = fresh && (a - e.record.x).norm() >= options.tol_sep;
        e.distinct = fresh;
        if (fresh) accepted.push_back(e.record.x);
      }
      warm = {e.record.x};
    } catch (const Error& err) {
      e.note = err.what();
      seq.entries.push_back(e);
      continue;
    }
    seq.entries.push_back(e);
  }
  return seq;
}

bool same_point(const SequenceEntry& a, const SequenceEntry& b, double tol) {
  return a.record.x.size() > 0 && b.record.x.size() > 0 && (a.record.x - b.record.x).norm() < tol;
}

// Last k entries are interior and coincide.
bool stabilized(const MinimaSequence& seq, int k, double tol) {
  const int n = static_cast<int>(seq.entries.size());
  if (n < k) return false;
  for (int i = n - k; i < n; ++i) {
    if (!seq.entries[i].interior || !same_point(seq.entries[i], seq.entries[n - 1], tol)) return false;
  }
  return true;
}

}  // namespace

MinimaSequence descending_sequence(const FunctionalPair& pair, double lambda, const std::vector<double>& schedule,
                                   const MultiplicityOptions& options) {
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    if (!(schedule[i] < schedule[i - 1])) throw UsageError("descending_sequence needs a decreasing schedule");
  }
  PsiInfimum inf_psi;
  MinimaSequence seq = run_levels(pair, lambda, schedule, options, inf_psi);

  // Longest run of distinct records whose Psi - inf Psi shrinks by the trend factor.
  std::vector<double> gaps;
  for (const auto& e : seq.entries) {
    if (e.distinct) gaps.push_back(e.record.psi_val - inf_psi.value);
  }
  int run = gaps.empty() ? 0 : 1;
  int best_run = run;
  for (std::size_t i = 1; i < gaps.size(); ++i) {
    run = (gaps[i] > 0.0 && gaps[i] * options.trend_factor <= gaps[i - 1]) ? run + 1 : 1;
    best_run = std::max(best_run, run);
  }
  if (best_run >= options.trend_length) {
    seq.branch = Branch::converging_sequence;
    seq.diagnostic = std::to_string(gaps.size()) + " distinct critical points; Psi decreases by factor >= " +
                     std::to_string(options.trend_factor) + " over " + std::to_string(best_run) + " consecutive records";
    return seq;
  }
  if (stabilized(seq, 3, options.tol_sep)) {
    const auto& last = seq.entries.back().record;
    const bool at_inf = last.psi_val - inf_psi.value <= 1e-8 * (1.0 + std::abs(inf_psi.value));
    if (at_inf && is_local_min_probe(pair, lambda, last.x, options.eps_schedule, options.sublevel.search.seed,
                                     options.probe_directions)) {
      seq.branch = Branch::zero_is_local_min;
      seq.diagnostic = "minimizers settle at a global minimizer of Psi that passes the local-minimum probe";
      return seq;
    }
  }
  seq.diagnostic = "no converging trend and no stable local minimum at inf Psi";
  return seq;
}

MinimaSequence ascending_alternative(const FunctionalPair& pair, double lambda, const std::vector<double>& schedule,
                                     const MultiplicityOptions& options) {
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    if (!(schedule[i] > schedule[i - 1])) throw UsageError("ascending_alternative needs an increasing schedule");
  }
  PsiInfimum inf_psi;
  MinimaSequence seq = run_levels(pair, lambda, schedule, options, inf_psi);
  const int n = static_cast<int>(seq.entries.size());

  if (stabilized(seq, 3, options.tol_sep)) {
    auto& last = seq.entries.back().record;
    BoxMinimum box = expanding_box_minimum(combination_of(pair.phi, lambda, pair.psi), pair.domain(),
                                           options.sublevel.search);
    const double v = last.value();
    if (box.found && box.value >= v - 1e-8 * (1.0 + std::abs(v))) {
      last.kind = CriticalPointRecord::Kind::global_min;
      seq.branch = Branch::global_min_found;
      seq.diagnostic = "minimizers stabilize; expanding-box search finds no lower value";
    } else {
      seq.diagnostic = "minimizers stabilize but the expanding-box search disagrees";
    }
    return seq;
  }

  // Each of the last k minimizers lies beyond the previous level.
  const int k = options.trend_length;
  bool escaping = n > k;
  for (int i = n - k; escaping && i < n; ++i) {
    const auto& e = seq.entries[i];
    escaping = e.record.x.size() > 0 && e.record.psi_val > seq.entries[i - 1].rho &&
               e.record.psi_val > seq.entries[i - 1].record.psi_val;
  }
  if (escaping) {
    seq.branch = Branch::escaping_sequence;
    seq.diagnostic = "Psi of the minimizers exceeds the previous level at each of the last " + std::to_string(k) +
                     " levels";
    return seq;
  }
  seq.diagnostic = "neither stabilization nor persistent growth";
  return seq;
}

bool is_local_min_probe(const FunctionalPair& pair, double lambda, const Vec& x, const std::vector<double>& eps_schedule,
                        std::uint64_t seed, int samples) {
  const Domain domain = pair.domain();
  const Objective f = combination_of(pair.phi, lambda, pair.psi);
  const double f0 = f(x, nullptr);
  const double threshold = f0 - 1e-12 * (1.0 + std::abs(f0));
  const int n = static_cast<int>(x.size());
  Rng rng(seed, 0x9e3779b9ULL);
  for (double eps : eps_schedule) {
    for (int k = 0; k < samples; ++k) {
      const Vec u = rng.unit_vector(n);
      const double r = eps * std::pow(rng.uniform(), 1.0 / n);
      const Vec y = domain.project(x + r * u);
      if (f(y, nullptr) < threshold) return false;
    }
  }
  return true;
}

}  // namespace varprin
