#pragma once

// Independent brute-force references for one-dimensional problems. Nothing
// here calls into the library under test.

#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

namespace oracle {

using Fn = std::function<double(double)>;

/// Golden-section refinement of a minimum bracketed by [lo, hi].
inline std::pair<double, double> golden_min(const Fn& f, double lo, double hi, int iterations = 200) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iterations && b - a > 1e-15 * (1.0 + std::abs(a)); ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  const double x = fc < fd ? c : d;
  return {x, f(x)};
}

/// Dense grid scan on [lo, hi] followed by golden refinement around the best
/// node. Returns (argmin, min).
inline std::pair<double, double> grid_min(const Fn& f, double lo, double hi, int n = 20001) {
  double best_x = lo, best = std::numeric_limits<double>::infinity();
  int best_i = 0;
  for (int i = 0; i <= n; ++i) {
    const double x = lo + (hi - lo) * i / n;
    const double v = f(x);
    if (v < best) {
      best = v;
      best_x = x;
      best_i = i;
    }
  }
  const double step = (hi - lo) / n;
  const double a = best_i == 0 ? lo : best_x - step;
  const double b = best_i == n ? hi : best_x + step;
  auto refined = golden_min(f, a, b);
  if (refined.second < best) return refined;
  return {best_x, best};
}

inline std::pair<double, double> grid_max(const Fn& f, double lo, double hi, int n = 20001) {
  auto r = grid_min([&](double x) { return -f(x); }, lo, hi, n);
  return {r.first, -r.second};
}

/// Bisection for a sign change of f on [lo, hi].
inline double bisect(const Fn& f, double lo, double hi, int iterations = 200) {
  double flo = f(lo);
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Sublevel quantities for a 1D pair on the interval [lo, hi] = {Psi <= rho}.
struct Pair1d {
  Fn phi;
  Fn psi;
  double lo;
  double hi;
};

inline double alpha(const Pair1d& p) { return grid_min(p.phi, p.lo, p.hi).second; }

/// inf of (Phi - alpha)/(rho - Psi) over the open interval.
inline double phi_ratio(const Pair1d& p, double rho) {
  const double a = alpha(p);
  const double w = p.hi - p.lo;
  const double lo = p.lo + 1e-9 * w, hi = p.hi - 1e-9 * w;
  return grid_min([&](double x) { return (p.phi(x) - a) / (rho - p.psi(x)); }, lo, hi).second;
}

/// sup of (Phi + r)/(Psi - rho) over the open interval.
inline double beta(const Pair1d& p, double rho, double r) {
  const double w = p.hi - p.lo;
  const double lo = p.lo + 1e-12 * w, hi = p.hi - 1e-12 * w;
  return grid_max([&](double x) { return (p.phi(x) + r) / (p.psi(x) - rho); }, lo, hi).second;
}

/// Root of beta(r) = -lambda by bisection on [r_lo, r_hi].
inline double r0(const Pair1d& p, double rho, double lambda, double r_lo, double r_hi) {
  return bisect([&](double r) { return beta(p, rho, r) + lambda; }, r_lo, r_hi, 80);
}

/// Positive roots of P'(x) = x for P_osc, located by sign changes of
/// sin(L) + x^2 cos(L)/(1+x^2), L = ln(1+x^2), then bisection.
inline std::vector<double> p_osc_fixed_points(double x_max, int scan = 200000) {
  auto g = [](double x) {
    const double L = std::log1p(x * x);
    return std::sin(L) + x * x * std::cos(L) / (1.0 + x * x);
  };
  std::vector<double> roots;
  const double a = std::log(0.5), b = std::log(x_max);
  double prev_x = std::exp(a), prev = g(prev_x);
  for (int i = 1; i <= scan; ++i) {
    const double x = std::exp(a + (b - a) * i / scan);
    const double v = g(x);
    if ((v < 0.0) != (prev < 0.0)) roots.push_back(bisect(g, prev_x, x));
    prev_x = x;
    prev = v;
  }
  return roots;
}

/// sup over |x| <= r of P_osc(x) / r^2 by dense scan.
inline double p_osc_profile(double r) {
  auto P = [](double x) { return 0.5 * x * x + 0.3 * x * x * std::sin(std::log1p(x * x)); };
  return grid_max(P, 0.0, r, 40001).second / (r * r);
}

}  // namespace oracle
