#include "varprin/local_search.hpp"

#include <cmath>

namespace varprin {

Vec projected_gradient(const Vec& x, const Vec& g, const Domain& box) {
  Vec pg = g;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if ((x[i] <= box.lower()[i] && g[i] > 0.0) || (x[i] >= box.upper()[i] && g[i] < 0.0)) pg[i] = 0.0;
  }
  return pg;
}

LocalResult minimize_box(const Objective& objective, const Vec& start, const Domain& box,
                         const LocalOptions& options) {
  const Eigen::Index n = start.size();
  LocalResult out;
  Vec x = box.project(start);
  Vec g(n);
  double f = objective(x, &g);
  out.x = x;
  out.value = f;
  out.gradient = g;
  if (!std::isfinite(f)) return out;

  Eigen::MatrixXd H = Eigen::MatrixXd::Identity(n, n);
  bool identity = true;
  Vec pg = projected_gradient(x, g, box);
  double pg_norm = pg.lpNorm<Eigen::Infinity>();
  Vec gt(n);

  int it = 0;
  for (; it < options.max_iterations; ++it) {
    if (pg_norm <= options.gtol * (1.0 + std::abs(f))) {
      out.converged = true;
      break;
    }
    // Variables held at a bound are excluded from the quasi-Newton step.
    Vec z = pg;
    Vec d = -(H * z);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (pg[i] == 0.0) d[i] = 0.0;
    }
    if (!(g.dot(d) < 0.0)) {
      H.setIdentity();
      identity = true;
      d = -z;
    }

    double t = 1.0;
    if (identity) t = std::min(1.0, 1.0 / std::max(d.lpNorm<Eigen::Infinity>(), 1e-300));
    bool accepted = false;
    Vec xt(n);
    double ft = kInf;
    for (int k = 0; k < 80; ++k) {
      xt = box.project(x + t * d);
      ft = objective(xt, &gt);
      if (std::isfinite(ft)) {
        const double decrease = g.dot(xt - x);
        if (ft <= f + 1e-4 * decrease) {
          accepted = true;
          break;
        }
        // Near a minimizer the value stalls at roundoff; accept steps that
        // shrink the projected gradient instead.
        if (ft <= f + 4e-16 * (1.0 + std::abs(f)) &&
            projected_gradient(xt, gt, box).lpNorm<Eigen::Infinity>() < 0.5 * pg_norm) {
          accepted = true;
          break;
        }
      }
      t *= std::isfinite(ft) ? 0.5 : 0.1;
    }
    if (!accepted) {
      if (!identity) {
        H.setIdentity();
        identity = true;
        continue;
      }
      break;
    }

    const Vec s = xt - x;
    const Vec y = gt - g;
    x = xt;
    f = ft;
    g = gt;
    pg = projected_gradient(x, g, box);
    pg_norm = pg.lpNorm<Eigen::Infinity>();
    if (s.lpNorm<Eigen::Infinity>() <= options.xtol * (1.0 + x.lpNorm<Eigen::Infinity>())) {
      out.converged = pg_norm <= options.gtol * (1.0 + std::abs(f));
      ++it;
      break;
    }
    const double sy = s.dot(y);
    if (sy > 1e-14 * s.norm() * y.norm() && sy > 0.0) {
      if (identity) {
        H *= sy / y.squaredNorm();
        identity = false;
      }
      const double rho = 1.0 / sy;
      const Vec Hy = H * y;
      // Inverse BFGS update.
      H += rho * ((1.0 + rho * y.dot(Hy)) * (s * s.transpose()) - (Hy * s.transpose() + s * Hy.transpose()));
    }
  }
  out.x = x;
  out.value = f;
  out.gradient = g;
  out.projected_gradient_norm = pg_norm;
  out.iterations = it;
  if (!out.converged) out.converged = pg_norm <= options.gtol * (1.0 + std::abs(f));
  return out;
}

}  // namespace varprin
