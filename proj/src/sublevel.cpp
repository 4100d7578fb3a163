#include "varprin/sublevel.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "varprin/errors.hpp"

namespace varprin {

std::string to_string(EstimateDirection d) {
  switch (d) {
    case EstimateDirection::exact: return "exact";
    case EstimateDirection::upper: return "upper";
    case EstimateDirection::lower: return "lower";
  }
  return "unknown";
}

std::string to_string(CriticalPointRecord::Kind k) {
  switch (k) {
    case CriticalPointRecord::Kind::sublevel_global: return "sublevel_global";
    case CriticalPointRecord::Kind::local_min: return "local_min";
    case CriticalPointRecord::Kind::global_min: return "global_min";
    case CriticalPointRecord::Kind::fixed_point: return "fixed_point";
  }
  return "unknown";
}

PsiInfimum estimate_inf_psi(const Functional& psi, const Domain& domain, const SearchOptions& options) {
  Region region{domain, {}};
  const Vec center = domain.project(Vec::Zero(psi.dim()));
  const Domain box = enclosing_box(region, center, options.seed, 10.0);
  MultiStartResult r = minimize_multistart(objective_of(psi), region, box, center, ConstraintMode::penalty, options);
  return {r.value, r.x};
}

SublevelProblem::SublevelProblem(FunctionalPair pair, double rho, const SublevelOptions& options)
    : pair_(std::move(pair)), rho_(rho), domain_(pair_.domain()), sampling_box_(domain_) {
  if (pair_.phi.dim() != pair_.psi.dim()) throw UsageError("Phi and Psi have different dimensions");
  if (!pair_.psi.properties().coercive) {
    throw PreconditionError("Psi ('" + pair_.psi.label() + "') must be flagged coercive");
  }
  inf_psi_ = estimate_inf_psi(pair_.psi, domain_, options.search);
  validate(options);
}

SublevelProblem::SublevelProblem(FunctionalPair pair, double rho, PsiInfimum inf_psi, const SublevelOptions& options)
    : pair_(std::move(pair)), rho_(rho), domain_(pair_.domain()), inf_psi_(std::move(inf_psi)), sampling_box_(domain_) {
  if (pair_.phi.dim() != pair_.psi.dim()) throw UsageError("Phi and Psi have different dimensions");
  if (!pair_.psi.properties().coercive) {
    throw PreconditionError("Psi ('" + pair_.psi.label() + "') must be flagged coercive");
  }
  validate(options);
}

void SublevelProblem::validate(const SublevelOptions& options) {
  if (!std::isfinite(rho_)) throw UsageError("rho must be finite");
  if (!(rho_ > inf_psi_.value)) {
    throw PreconditionError("rho = " + std::to_string(rho_) + " does not exceed the estimated infimum of Psi (" +
                            std::to_string(inf_psi_.value) + ")");
  }
  if (!domain_.contains(inf_psi_.argmin)) throw InfeasibleError("no witness point of {Psi <= rho} in the domain");
  sampling_box_ = enclosing_box(region(), inf_psi_.argmin, options.search.seed);
}

Region SublevelProblem::region(double shrink) const {
  return Region{domain_, {LevelConstraint{pair_.psi, -kInf, rho_ - shrink}}};
}

namespace {

bool at_domain_bound(const Domain& d, const Vec& x) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] <= d.lower()[i] || x[i] >= d.upper()[i]) return true;
  }
  return false;
}

// Newton on the KKT system grad Phi + nu grad Psi = 0, Psi = rho, with a
// central-difference Hessian. Returns nullopt unless it converges to a
// feasible point near x with nu >= 0.
std::optional<Vec> kkt_polish(const SublevelProblem& problem, const Vec& x0) {
  const Functional& phi = problem.phi();
  const Functional& psi = problem.psi();
  const int n = problem.dim();
  const double rho = problem.rho();
  if (at_domain_bound(problem.domain(), x0)) return std::nullopt;
  Vec x = x0;
  double nu = 0.0;
  bool converged = false;
  for (int it = 0; it < 30; ++it) {
    const Vec g = phi.gradient_or_fd(x);
    const Vec m = psi.gradient_or_fd(x);
    const double mm = m.squaredNorm();
    if (!(mm > 0.0)) return std::nullopt;
    if (it == 0) nu = -g.dot(m) / mm;
    if (nu < 0.0) return std::nullopt;
    Eigen::VectorXd F(n + 1);
    F.head(n) = g + nu * m;
    F[n] = psi.value_unchecked(x) - rho;
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + 1, n + 1);
    for (int j = 0; j < n; ++j) {
      const double h = 1e-6 * (1.0 + std::abs(x[j]));
      Vec xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      K.col(j).head(n) = (phi.gradient_or_fd(xp) - phi.gradient_or_fd(xm) +
                          nu * (psi.gradient_or_fd(xp) - psi.gradient_or_fd(xm))) /
                         (2.0 * h);
    }
    K.col(n).head(n) = m;
    K.row(n).head(n) = m.transpose();
    const Eigen::VectorXd step = K.fullPivLu().solve(-F);
    if (!step.allFinite()) return std::nullopt;
    x += step.head(n);
    nu += step[n];
    if (step.head(n).norm() <= 1e-15 * (1.0 + x.norm())) {
      converged = true;
      break;
    }
    if (it >= 3 && step.head(n).norm() <= 1e-13 * (1.0 + x.norm())) converged = true;
  }
  if (!converged || nu < 0.0 || (x - x0).norm() > 1e-3 * (1.0 + x0.norm())) return std::nullopt;
  for (int k = 0; k < 8 && psi.value_unchecked(x) > rho; ++k) {
    const Vec m = psi.gradient_or_fd(x);
    const double excess = psi.value_unchecked(x) - rho;
    x -= (excess / m.squaredNorm() + 4e-16 * (1.0 + x.norm())) * m;
  }
  if (psi.value_unchecked(x) > rho || !problem.domain().contains(x) || at_domain_bound(problem.domain(), x)) {
    return std::nullopt;
  }
  return x;
}

void polish_active(const SublevelProblem& problem, MinimizeResult& r) {
  if (!r.constraint_active) return;
  if (auto x = kkt_polish(problem, r.x)) {
    r.x = *x;
    r.value = problem.phi().value_unchecked(*x);
  }
}

}  // namespace

MinimizeResult alpha(const SublevelProblem& problem, const SublevelOptions& options) {
  MultiStartResult r = minimize_multistart(objective_of(problem.phi()), problem.region(), problem.sampling_box(),
                                           problem.witness(), ConstraintMode::penalty, options.search);
  MinimizeResult out;
  out.x = r.x;
  out.value = problem.phi().value_unchecked(r.x);
  out.starts_used = r.starts_used;
  out.best_start_index = r.best_start_index;
  out.constraint_active = r.constraint_active;
  polish_active(problem, out);
  return out;
}

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

double strict_tol(const SublevelProblem& p, const SublevelOptions& o) { return o.tol_strict_rel * (1.0 + std::abs(p.rho())); }

// Improves alpha by a local penalty solve started at a point that beat it.
MinimizeResult refine_alpha(const SublevelProblem& problem, const MinimizeResult& current, const Vec& better,
                            const SublevelOptions& options) {
  SearchOptions local = options.search;
  local.starts = 0;
  local.grid_1d = 0;
  MultiStartResult r = minimize_multistart(objective_of(problem.phi()), problem.region(), problem.sampling_box(),
                                           problem.witness(), ConstraintMode::penalty, local, {better});
  MinimizeResult out = current;
  const double v = problem.phi().value_unchecked(r.x);
  const double vb = problem.phi().value_unchecked(better);
  if (v < out.value) {
    out.x = r.x;
    out.value = v;
    out.constraint_active = r.constraint_active;
    polish_active(problem, out);
  }
  if (vb < out.value) {
    out.x = better;
    out.value = vb;
    out.constraint_active = false;
  }
  return out;
}

// Limit of the ratio along the inward (box-feasible) normal at a boundary
// minimizer of Phi.
std::optional<double> normal_limit(const SublevelProblem& problem, const Vec& x) {
  const Vec gphi = problem.phi().gradient_or_fd(x);
  const Vec gpsi = problem.psi().gradient_or_fd(x);
  Vec d = -gpsi;
  const Domain& box = problem.domain();
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (x[i] <= box.lower()[i]) d[i] = std::max(d[i], 0.0);
    if (x[i] >= box.upper()[i]) d[i] = std::min(d[i], 0.0);
  }
  const double den = -gpsi.dot(d);
  if (!(den > 0.0)) return std::nullopt;
  return std::max(0.0, gphi.dot(d) / den);
}

}  // namespace

PhiResult phi_of_rho(const SublevelProblem& problem, const SublevelOptions& options) {
  return phi_of_rho(problem, alpha(problem, options), options);
}

PhiResult phi_of_rho(const SublevelProblem& problem, MinimizeResult alpha_result, const SublevelOptions& options) {
  const double tol = strict_tol(problem, options);
  const Region strict = problem.region(tol);
  const Functional& phi = problem.phi();
  const Functional& psi = problem.psi();
  const double rho = problem.rho();

  PhiResult out;
  for (int round = 0; round < 4; ++round) {
    const double a = alpha_result.value;
    Objective ratio = [&phi, &psi, rho, tol, a](const Vec& x, Vec* grad) {
      const double den = rho - psi.value_unchecked(x);
      if (!(den >= tol)) return kInf;
      const double num = phi.value_unchecked(x) - a;
      if (grad) *grad = phi.gradient_or_fd(x) / den + (num / (den * den)) * psi.gradient_or_fd(x);
      return num / den;
    };
    MultiStartResult r = minimize_multistart(ratio, strict, problem.sampling_box(), problem.witness(),
                                             ConstraintMode::barrier, options.search);
    // A feasible point below alpha means alpha was not the infimum.
    const StartOutcome* better = nullptr;
    for (const auto& o : r.outcomes) {
      if (!o.feasible) continue;
      if (phi.value_unchecked(o.x) < a && (!better || phi.value_unchecked(o.x) < phi.value_unchecked(better->x))) {
        better = &o;
      }
    }
    if (better && round < 3) {
      alpha_result = refine_alpha(problem, alpha_result, better->x, options);
      continue;
    }
    out.x = r.x;
    out.interior_value = r.value;
    break;
  }
  out.alpha = alpha_result;
  out.value = out.interior_value;
  if (alpha_result.constraint_active) {
    out.boundary_limit = normal_limit(problem, alpha_result.x);
    // Next to the level set the ratio is a quotient of two tiny differences
    // and its computed value is roundoff; the normal limit replaces it there.
    const bool near_level = rho - psi.value_unchecked(out.x) <= options.boundary_band_rel * (1.0 + std::abs(rho));
    if (out.boundary_limit && (near_level || *out.boundary_limit < out.value)) {
      out.value = *out.boundary_limit;
      out.attained_in_interior = false;
    }
  }
  return out;
}

BetaResult beta(const SublevelProblem& problem, double r, const SublevelOptions& options) {
  return beta(problem, r, alpha(problem, options), options);
}

BetaResult beta(const SublevelProblem& problem, double r, const MinimizeResult& alpha_result,
                const SublevelOptions& options, const std::vector<Vec>& warm_starts) {
  if (!(r > -alpha_result.value)) {
    throw PreconditionError("beta requires r > -alpha(rho) = " + std::to_string(-alpha_result.value));
  }
  const double tol = strict_tol(problem, options);
  const Region strict = problem.region(tol);
  const Functional& phi = problem.phi();
  const Functional& psi = problem.psi();
  const double rho = problem.rho();
  // beta = -inf of (Phi + r)/(rho - Psi).
  Objective quotient = [&phi, &psi, rho, tol, r](const Vec& x, Vec* grad) {
    const double den = rho - psi.value_unchecked(x);
    if (!(den >= tol)) return kInf;
    const double num = phi.value_unchecked(x) + r;
    if (grad) *grad = phi.gradient_or_fd(x) / den + (num / (den * den)) * psi.gradient_or_fd(x);
    return num / den;
  };
  MultiStartResult res = minimize_multistart(quotient, strict, problem.sampling_box(), problem.witness(),
                                             ConstraintMode::barrier, options.search, warm_starts);
  for (const auto& o : res.outcomes) {
    if (o.feasible && !(phi.value_unchecked(o.x) + r > 0.0)) {
      throw PreconditionError("beta: found x with Phi(x) <= -r, so r does not exceed -inf Phi on the sublevel set");
    }
  }
  return {-res.value, res.x, r};
}

RootResult solve_r0(const SublevelProblem& problem, double lambda, const SublevelOptions& options) {
  return solve_r0(problem, lambda, phi_of_rho(problem, options), options);
}

RootResult solve_r0(const SublevelProblem& problem, double lambda, const PhiResult& phi, const SublevelOptions& options) {
  if (!(lambda > phi.value)) {
    throw PreconditionError("solve_r0 requires lambda > phi(rho) = " + std::to_string(phi.value));
  }
  const MinimizeResult& a = phi.alpha;
  RootResult out;
  std::vector<Vec> warm;
  auto eval = [&](double r) {
    BetaResult b = beta(problem, r, a, options, warm);
    warm = {b.x};
    ++out.evaluations;
    return b;
  };
  const double psi_rho = problem.rho();
  auto slope = [&](const BetaResult& b) { return 1.0 / (problem.psi().value_unchecked(b.x) - psi_rho); };

  double offset = 1e-8 * (1.0 + std::abs(a.value));
  double r_lo = -a.value + offset;
  BetaResult b_lo = eval(r_lo);
  for (int k = 0; k < 30 && b_lo.value < -lambda; ++k) {
    offset *= 0.1;
    if (-a.value + offset == -a.value) break;
    r_lo = -a.value + offset;
    b_lo = eval(r_lo);
  }
  if (b_lo.value < -lambda) throw NumericalError("solve_r0: could not bracket the root from below", b_lo.x);

  double width = 1.0;
  double r_hi = r_lo + width;
  BetaResult b_hi = eval(r_hi);
  for (int d = 0; b_hi.value >= -lambda; ++d) {
    if (d >= options.max_doublings) throw NumericalError("solve_r0: bracket expansion failed", b_hi.x);
    width *= 2.0;
    r_hi = r_lo + width;
    b_hi = eval(r_hi);
  }

  const double tol = options.tol_root_rel * (1.0 + lambda);
  BetaResult best = std::abs(b_lo.value + lambda) <= std::abs(b_hi.value + lambda) ? b_lo : b_hi;
  double prev_width = r_hi - r_lo;
  for (int it = 0; it < 400 && std::abs(best.value + lambda) > tol; ++it) {
    // Newton from the left end stays left of the root (beta is convex and
    // decreasing); bisection keeps the bracket shrinking.
    double r = r_lo - (b_lo.value + lambda) / slope(b_lo);
    const bool newton_ok = r > r_lo && r < r_hi && (it % 3 != 2 || (r_hi - r_lo) < 0.5 * prev_width);
    if (!newton_ok) r = 0.5 * (r_lo + r_hi);
    if (it % 3 == 2) prev_width = r_hi - r_lo;
    if (r <= r_lo || r >= r_hi) break;
    BetaResult b = eval(r);
    if (std::abs(b.value + lambda) < std::abs(best.value + lambda)) best = b;
    if (b.value >= -lambda) {
      r_lo = r;
      b_lo = b;
    } else {
      r_hi = r;
      b_hi = b;
    }
  }
  if (std::abs(best.value + lambda) > tol) {
    throw NumericalError("solve_r0: |beta(r0) + lambda| = " + sci(std::abs(best.value + lambda)) + " exceeds tolerance " + sci(tol),
                         best.x);
  }
  out.r0 = best.r;
  out.beta = best;
  out.bracket_lo = r_lo;
  out.bracket_hi = r_hi;
  return out;
}

MinimizeResult minimize_combination(const SublevelProblem& problem, double lambda, const SublevelOptions& options,
                                    const std::vector<Vec>& warm_starts) {
  MultiStartResult r = minimize_multistart(combination_of(problem.phi(), lambda, problem.psi()), problem.region(),
                                           problem.sampling_box(), problem.witness(), ConstraintMode::penalty,
                                           options.search, warm_starts);
  MinimizeResult out;
  out.x = r.x;
  out.value = problem.phi().value_unchecked(r.x) + lambda * problem.psi().value_unchecked(r.x);
  out.starts_used = r.starts_used;
  out.best_start_index = r.best_start_index;
  out.constraint_active = r.constraint_active;
  return out;
}

std::optional<double> combination_grad_norm(const FunctionalPair& pair, double lambda, const Vec& x,
                                            const Domain& domain) {
  if (!pair.phi.has_gradient() || !pair.psi.has_gradient()) return std::nullopt;
  const Vec g = pair.phi.gradient_unchecked(x) + lambda * pair.psi.gradient_unchecked(x);
  return projected_gradient(x, g, domain).norm();
}

ConstructiveResult constructive_minimizer(const SublevelProblem& problem, double lambda,
                                          const SublevelOptions& options) {
  ConstructiveResult out;
  out.phi = phi_of_rho(problem, options);
  if (!(lambda > out.phi.value)) {
    throw PreconditionError("constructive_minimizer requires lambda > phi(rho) = " + std::to_string(out.phi.value));
  }
  out.root = solve_r0(problem, lambda, out.phi, options);
  const Vec& x0 = out.root.beta.x;
  CriticalPointRecord& rec = out.record;
  rec.x = x0;
  rec.lambda = lambda;
  rec.phi_val = problem.phi().value_unchecked(x0);
  rec.psi_val = problem.psi().value_unchecked(x0);
  rec.grad_norm = combination_grad_norm(problem.pair(), lambda, x0, problem.domain());
  rec.kind = CriticalPointRecord::Kind::sublevel_global;
  if (!(rec.psi_val < problem.rho())) throw NumericalError("constructive minimizer left the open sublevel set", x0);

  out.direct = minimize_combination(problem, lambda, options);
  const double v0 = rec.value();
  out.discrepancy = v0 - out.direct.value;
  if (std::abs(out.discrepancy) > options.tol_cross_rel * (1.0 + std::abs(v0))) {
    throw InconsistencyError("constructive minimizer value " + sci(v0) + " disagrees with direct minimization " +
                                 sci(out.direct.value),
                             x0, out.direct.x);
  }
  return out;
}

}  // namespace varprin
