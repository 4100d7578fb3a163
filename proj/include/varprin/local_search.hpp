#pragma once

#include <functional>

#include "varprin/functional.hpp"

namespace varprin {

/// Objective for the local solvers: returns the value at x and writes the
/// gradient into *grad. A value of +inf marks x as inadmissible; the line
/// search backs off from such points.
using Objective = std::function<double(const Vec& x, Vec* grad)>;

struct LocalOptions {
  int max_iterations = 3000;
  /// Converged when the projected gradient satisfies ||pg||_inf <= gtol*(1+|f|).
  double gtol = 1e-13;
  /// Stop when a step is below xtol*(1+||x||_inf).
  double xtol = 1e-16;
};

struct LocalResult {
  Vec x;
  double value = kInf;
  Vec gradient;
  double projected_gradient_norm = kInf;
  int iterations = 0;
  bool converged = false;
};

/// Projected gradient for simple bounds: components that push against an
/// active bound are zeroed.
Vec projected_gradient(const Vec& x, const Vec& g, const Domain& box);

/// Quasi-Newton (BFGS) descent with projection onto the box. The start is
/// projected first; it must have a finite value.
LocalResult minimize_box(const Objective& objective, const Vec& start, const Domain& box,
                         const LocalOptions& options = {});

}  // namespace varprin
