#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace varprin {

using Vec = Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Closed convex set given by per-coordinate bounds (possibly infinite).
class Domain {
 public:
  enum class Kind { all_space, box, halfspace_product };

  static Domain all_space(int dim);
  static Domain box(Vec lower, Vec upper);
  /// Product of half-lines [lower_i, +inf).
  static Domain halfspace_product(Vec lower);

  Kind kind() const { return kind_; }
  int dim() const { return static_cast<int>(lower_.size()); }
  const Vec& lower() const { return lower_; }
  const Vec& upper() const { return upper_; }

  bool contains(const Vec& x) const;
  Vec project(const Vec& x) const;
  bool is_unbounded() const;
  /// Intersection of two domains of the same dimension.
  Domain intersect(const Domain& other) const;

  std::string kind_name() const;

 private:
  Domain(Kind kind, Vec lower, Vec upper);

  Kind kind_;
  Vec lower_;
  Vec upper_;
};

/// Declared analytic properties of a functional.
struct Properties {
  bool convex = false;
  bool coercive = false;
  bool differentiable = false;
};

/// Evaluation oracle for a scalar functional on R^n.
///
/// Oracles are immutable after construction and their callables must be pure,
/// so one instance may be shared by concurrent workers.
class Functional {
 public:
  using ValueFn = std::function<double(const Vec&)>;
  using GradientFn = std::function<Vec(const Vec&)>;

  Functional(std::string label, int dim, ValueFn value, std::optional<GradientFn> gradient,
             Properties props, std::optional<Domain> domain = std::nullopt);

  const std::string& label() const { return label_; }
  int dim() const { return dim_; }
  const Properties& properties() const { return props_; }
  bool has_gradient() const { return gradient_.has_value(); }
  /// Attached domain; all_space when none was given.
  const Domain& domain() const { return domain_; }

  /// Checked evaluation: dimension and domain membership are validated and
  /// non-finite results raise OracleFault.
  double value(const Vec& x) const;
  /// Checked gradient; raises CapabilityError when none is available.
  Vec gradient(const Vec& x) const;

  /// Unchecked fast paths used inside solvers (dimension assumed correct).
  double value_unchecked(const Vec& x) const { return value_(x); }
  Vec gradient_unchecked(const Vec& x) const { return (*gradient_)(x); }

  /// Analytic gradient when present, otherwise central differences.
  Vec gradient_or_fd(const Vec& x) const;

  Functional negated(std::string label) const;
  Functional with_domain(const Domain& domain) const;

 private:
  std::string label_;
  int dim_;
  ValueFn value_;
  std::optional<GradientFn> gradient_;
  Properties props_;
  Domain domain_;
};

/// Same as Functional::value; kept as a free function for pipeline code.
double evaluate(const Functional& f, const Vec& x);

/// Central-difference gradient with per-coordinate step h*(1+|x_i|).
Vec central_difference_gradient(const Functional& f, const Vec& x, double h = 1e-6);

struct GradientCheckReport {
  std::vector<double> errors;  // one relative error per sample point
  double max_rel_error = 0.0;
  double tol_rel = 0.0;
  bool passed = false;
};

/// Compares the analytic gradient with central differences at every sample.
/// The relative error at a point is ||g - g_fd||_inf / max(||g||_inf, ||g_fd||_inf, 1e-300).
GradientCheckReport check_gradient(const Functional& f, std::span<const Vec> points, double h = 1e-6,
                                   double tol_rel = 1e-5);

struct CoercivityProbe {
  bool increasing = false;
  std::vector<double> radii;
  std::vector<std::vector<double>> values;  // values[direction][radius]
};

/// Evaluates f along coordinate and seeded random directions at the given
/// radii; the probe passes when values strictly increase along every direction
/// that stays inside the domain. Not a proof of coercivity.
CoercivityProbe probe_coercivity(const Functional& f, std::vector<double> radii = {1e2, 1e3, 1e4},
                                 std::uint64_t seed = 0);

}  // namespace varprin
