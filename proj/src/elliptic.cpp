#include "varprin/elliptic.hpp"

#include <cmath>

#include "varprin/errors.hpp"

namespace varprin {

namespace {

// |u|^{e-1} u, extended by 0 at u = 0.
double signed_pow(double u, double e) { return u == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(u), e), u); }

double positive_pow(double u, double e) { return u > 0.0 ? std::pow(u, e) : 0.0; }

// -Lap_h u with zero boundary values.
Vec neg_laplacian(const Vec& u, double h) {
  const Eigen::Index n = u.size();
  Vec out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double left = i > 0 ? u[i - 1] : 0.0;
    const double right = i + 1 < n ? u[i + 1] : 0.0;
    out[i] = (2.0 * u[i] - left - right) / (h * h);
  }
  return out;
}

}  // namespace

Vec EllipticConfig::alpha() const { return alpha_values.size() ? alpha_values : Vec::Constant(N, alpha_constant); }
Vec EllipticConfig::beta() const { return beta_values.size() ? beta_values : Vec::Constant(N, beta_constant); }

void EllipticConfig::validate() const {
  if (N < 16) throw UsageError("elliptic: N must be at least 16");
  if (!(b > 0.0) || !(c > 0.0)) throw UsageError("elliptic: b and c must be positive");
  if (!(s > 0.0 && s < 1.0)) throw UsageError("elliptic: s must lie in (0,1)");
  if (!(q > 1.0 && q < p)) throw UsageError("elliptic: exponents must satisfy 1 < q < p");
  if (alpha_values.size() && alpha_values.size() != N) throw UsageError("elliptic: alpha samples must have length N");
  if (beta_values.size() && beta_values.size() != N) throw UsageError("elliptic: beta samples must have length N");
  if (!std::isfinite(a)) throw UsageError("elliptic: a must be finite");
}

double discrete_energy(const Vec& u, double h) {
  const Eigen::Index n = u.size();
  double e = 0.0;
  for (Eigen::Index i = 0; i <= n; ++i) {
    const double left = i > 0 ? u[i - 1] : 0.0;
    const double right = i < n ? u[i] : 0.0;
    const double d = (right - left) / h;
    e += h * d * d;
  }
  return e;
}

double positive_part_term(const EllipticConfig& config, const Vec& u) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) sum += positive_pow(u[i], config.p + 1.0);
  return config.c / (config.p + 1.0) * config.h() * sum;
}

FunctionalPair assemble(const EllipticConfig& config) {
  config.validate();
  const EllipticConfig cfg = config;
  const double h = cfg.h();
  const Vec al = cfg.alpha();
  const Vec be = cfg.beta();
  const int n = cfg.N;

  auto phi_value = [cfg, be, h](const Vec& u) {
    double g = 0.0;
    double w = 0.0;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      g += positive_pow(u[i], cfg.p + 1.0);
      w += std::pow(std::abs(u[i]), cfg.q + 1.0);
    }
    return h * (cfg.c / (cfg.p + 1.0) * g - cfg.b / (cfg.q + 1.0) * w - be.dot(u));
  };
  auto phi_grad = [cfg, be, h](const Vec& u) {
    Vec g(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      g[i] = h * (cfg.c * positive_pow(u[i], cfg.p) - cfg.b * signed_pow(u[i], cfg.q) - be[i]);
    }
    return g;
  };
  auto psi_value = [cfg, al, h](const Vec& u) {
    double w = 0.0;
    for (Eigen::Index i = 0; i < u.size(); ++i) w += std::pow(std::abs(u[i]), cfg.s + 1.0);
    return 0.5 * discrete_energy(u, h) - h * (cfg.a / (cfg.s + 1.0) * w + al.dot(u));
  };
  auto psi_grad = [cfg, al, h](const Vec& u) {
    const Eigen::Index m = u.size();
    Vec g(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double left = i > 0 ? u[i - 1] : 0.0;
      const double right = i + 1 < m ? u[i + 1] : 0.0;
      g[i] = (2.0 * u[i] - left - right) / h - h * (cfg.a * signed_pow(u[i], cfg.s) + al[i]);
    }
    return g;
  };
  Functional phi("Phi_h", n, phi_value, phi_grad, Properties{false, false, true});
  Functional psi("Psi_h", n, psi_value, psi_grad, Properties{cfg.a <= 0.0, true, true});
  return {"ELLIPTIC(N=" + std::to_string(n) + ")", phi, psi};
}

Vec pde_residual(const EllipticConfig& config, const Vec& u, double lambda) {
  const Vec al = config.alpha();
  const Vec be = config.beta();
  Vec r = neg_laplacian(u, config.h());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    r[i] -= config.a * signed_pow(u[i], config.s) + al[i] +
            lambda * (config.b * signed_pow(u[i], config.q) - config.c * positive_pow(u[i], config.p) + be[i]);
  }
  return r;
}

SublevelOptions elliptic_sublevel_options() {
  SublevelOptions o;
  o.search.starts = 8;
  return o;
}

EllipticThreshold threshold_lambda_star(const EllipticConfig& config, const EllipticGrids& grids,
                                        const SublevelOptions& options) {
  const FunctionalPair pair = assemble(config);
  EllipticThreshold t;
  t.curve_up = sweep(pair, grids.up, options);
  t.curve_down = sweep(pair, grids.down, options);
  t.mu_star = kInf;
  for (const RatioCurve* c : {&t.curve_up, &t.curve_down}) {
    for (std::size_t i = 0; i < c->size(); ++i) {
      if (c->has_value(i) && c->phi_values[i] < t.mu_star) {
        t.mu_star = c->phi_values[i];
        t.rho_at_min = c->rho_grid[i];
      }
    }
  }
  constexpr double tiny = 1e-12;
  t.all_lambda_admissible = t.mu_star <= tiny;
  t.lambda_star = t.all_lambda_admissible ? kInf : 1.0 / t.mu_star;
  return t;
}

namespace {

// Thomas algorithm for a symmetric tridiagonal system (diag d, off-diagonal e).
Vec solve_tridiagonal(Vec d, double e, Vec rhs) {
  const Eigen::Index n = d.size();
  for (Eigen::Index i = 1; i < n; ++i) {
    const double m = e / d[i - 1];
    d[i] -= m * e;
    rhs[i] -= m * rhs[i - 1];
  }
  Vec x(n);
  x[n - 1] = rhs[n - 1] / d[n - 1];
  for (Eigen::Index i = n - 1; i-- > 0;) x[i] = (rhs[i] - e * x[i + 1]) / d[i];
  return x;
}

}  // namespace

EllipticSolution newton_solve(const EllipticConfig& config, double lambda, const Vec& u0, int max_iterations) {
  config.validate();
  const double h = config.h();
  EllipticSolution sol;
  sol.lambda = lambda;
  sol.u = u0;
  Vec r = pde_residual(config, sol.u, lambda);
  sol.residual_inf = r.lpNorm<Eigen::Infinity>();
  for (int it = 0; it < max_iterations && sol.residual_inf > kPdeTol; ++it) {
    Vec d(config.N);
    for (int i = 0; i < config.N; ++i) {
      const double ui = sol.u[i];
      double jac = 2.0 / (h * h) + lambda * (config.c * config.p * positive_pow(ui, config.p - 1.0) -
                                             config.b * config.q * std::pow(std::abs(ui), config.q - 1.0));
      if (ui != 0.0) jac -= config.a * config.s * std::pow(std::abs(ui), config.s - 1.0);
      d[i] = jac;
    }
    const Vec step = solve_tridiagonal(d, -1.0 / (h * h), -r);
    // Backtrack on the residual norm.
    double t = 1.0;
    for (int k = 0; k < 30; ++k, t *= 0.5) {
      const Vec trial = sol.u + t * step;
      const Vec rt = pde_residual(config, trial, lambda);
      if (rt.lpNorm<Eigen::Infinity>() < sol.residual_inf || k == 29) {
        sol.u = trial;
        r = rt;
        break;
      }
    }
    sol.residual_inf = r.lpNorm<Eigen::Infinity>();
    sol.newton_iterations = it + 1;
  }
  return sol;
}

EllipticSolution solve(const EllipticConfig& config, double lambda, const EllipticThreshold& threshold,
                       const SublevelOptions& options) {
  if (!(lambda > 0.0)) throw PreconditionError("elliptic solve requires lambda > 0");
  const FunctionalPair pair = assemble(config);
  const double mu = 1.0 / lambda;
  const double rho = threshold.rho_at_min;
  SublevelProblem problem(pair, rho, options);
  MultiplicityOptions mopts;
  mopts.sublevel = options;
  std::string note;
  if (!(lambda < threshold.lambda_star)) note = "lambda is not below the estimated threshold; ";
  CriticalPointRecord rec;
  try {
    rec = sublevel_critical_point(problem, mu, mopts);
  } catch (const PreconditionError& e) {
    note += std::string("direct minimization only: ") + e.what() + "; ";
    MinimizeResult d = minimize_combination(problem, mu, options);
    rec.x = d.x;
    rec.grad_norm = combination_grad_norm(pair, mu, d.x, problem.domain());
  }
  EllipticSolution sol = newton_solve(config, lambda, rec.x);
  sol.mu = mu;
  sol.rho = rho;
  sol.minimizer_grad_norm = rec.grad_norm;
  sol.note = note + (sol.residual_inf <= kPdeTol ? "converged" : "residual above tolerance");
  if (sol.residual_inf > kPdeTol) {
    throw NumericalError("elliptic solve: residual " + std::to_string(sol.residual_inf) + " above tolerance", sol.u);
  }
  return sol;
}

Vec hat_function(int N) {
  Vec d(N);
  const double h = 1.0 / (N + 1);
  for (int i = 0; i < N; ++i) {
    const double x = (i + 1) * h;
    d[i] = 1.0 - std::abs(2.0 * x - 1.0);
  }
  return d;
}

UnboundednessReport unbounded_below_probe(const EllipticConfig& config, double lambda, const Vec& direction) {
  if (direction.size() != config.N || direction.cwiseAbs().maxCoeff() == 0.0) {
    throw PreconditionError("probe direction must be a nonzero grid function of length N");
  }
  // b = 0 is allowed here to exhibit the missing mechanism.
  EllipticConfig cfg = config;
  const bool b_zero = cfg.b == 0.0;
  if (b_zero) cfg.b = 1.0;
  FunctionalPair pair = assemble(cfg);
  const Vec al = cfg.alpha();
  const Vec be = cfg.beta();
  const double h = cfg.h();
  auto value = [&](const Vec& u) {
    if (!b_zero) return pair.phi.value_unchecked(u) + lambda * pair.psi.value_unchecked(u);
    double g = 0.0;
    for (Eigen::Index i = 0; i < u.size(); ++i) g += positive_pow(u[i], cfg.p + 1.0);
    const double phi = h * (cfg.c / (cfg.p + 1.0) * g - be.dot(u));
    return phi + lambda * pair.psi.value_unchecked(u);
  };
  UnboundednessReport rep;
  rep.lambda = lambda;
  rep.mechanism_absent = b_zero;
  const Vec d = direction.cwiseAbs();
  for (double t = 1.0; t <= 1e6; t *= 2.0) {
    rep.below.t.push_back(t);
    rep.below.values.push_back(value(-t * d));
    rep.above.t.push_back(t);
    rep.above.values.push_back(value(t * d));
  }
  rep.below.passed = rep.below.values.back() < -1e6;
  rep.above.passed = rep.above.values.back() > 1e6;
  return rep;
}

}  // namespace varprin
