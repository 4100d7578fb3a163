#include "varprin/functional.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "varprin/errors.hpp"
#include "varprin/random.hpp"

namespace varprin {

Domain::Domain(Kind kind, Vec lower, Vec upper) : kind_(kind), lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) throw UsageError("domain bounds have different lengths");
  for (Eigen::Index i = 0; i < lower_.size(); ++i) {
    if (!(lower_[i] <= upper_[i])) throw UsageError("domain lower bound exceeds upper bound");
  }
}

Domain Domain::all_space(int dim) {
  return Domain(Kind::all_space, Vec::Constant(dim, -kInf), Vec::Constant(dim, kInf));
}

Domain Domain::box(Vec lower, Vec upper) { return Domain(Kind::box, std::move(lower), std::move(upper)); }

Domain Domain::halfspace_product(Vec lower) {
  const auto n = lower.size();
  return Domain(Kind::halfspace_product, std::move(lower), Vec::Constant(n, kInf));
}

bool Domain::contains(const Vec& x) const {
  if (x.size() != lower_.size()) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] < lower_[i] || x[i] > upper_[i]) return false;
  }
  return true;
}

Vec Domain::project(const Vec& x) const { return x.cwiseMax(lower_).cwiseMin(upper_); }

bool Domain::is_unbounded() const {
  for (Eigen::Index i = 0; i < lower_.size(); ++i) {
    if (std::isinf(lower_[i]) || std::isinf(upper_[i])) return true;
  }
  return false;
}

Domain Domain::intersect(const Domain& other) const {
  if (other.dim() != dim()) throw UsageError("cannot intersect domains of different dimension");
  if (kind_ == Kind::all_space) return other;
  if (other.kind_ == Kind::all_space) return *this;
  Vec lo = lower_.cwiseMax(other.lower_);
  Vec hi = upper_.cwiseMin(other.upper_);
  const bool half = hi.array().isInf().all();
  return Domain(half ? Kind::halfspace_product : Kind::box, std::move(lo), std::move(hi));
}

std::string Domain::kind_name() const {
  switch (kind_) {
    case Kind::all_space: return "all_space";
    case Kind::box: return "box";
    case Kind::halfspace_product: return "halfspace_product";
  }
  return "unknown";
}

Functional::Functional(std::string label, int dim, ValueFn value, std::optional<GradientFn> gradient,
                       Properties props, std::optional<Domain> domain)
    : label_(std::move(label)),
      dim_(dim),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      props_(props),
      domain_(domain ? *domain : Domain::all_space(dim)) {
  if (dim_ <= 0) throw UsageError("functional dimension must be positive");
  if (!value_) throw UsageError("functional '" + label_ + "' has no value map");
  if (domain_.dim() != dim_) throw UsageError("domain dimension does not match functional '" + label_ + "'");
}

namespace {

std::string describe(const Vec& x) {
  std::ostringstream os;
  os.precision(17);
  os << "[";
  for (Eigen::Index i = 0; i < x.size() && i < 8; ++i) os << (i ? ", " : "") << x[i];
  if (x.size() > 8) os << ", ...";
  os << "]";
  return os.str();
}

}  // namespace

double Functional::value(const Vec& x) const {
  if (x.size() != dim_) {
    throw UsageError("dimension mismatch for '" + label_ + "': expected " + std::to_string(dim_) + ", got " +
                     std::to_string(x.size()));
  }
  if (!domain_.contains(x)) throw UsageError("point " + describe(x) + " lies outside the domain of '" + label_ + "'");
  const double v = value_(x);
  if (!std::isfinite(v)) throw OracleFault("non-finite value of '" + label_ + "' at " + describe(x), x);
  return v;
}

Vec Functional::gradient(const Vec& x) const {
  if (!gradient_) throw CapabilityError("functional '" + label_ + "' has no gradient");
  if (x.size() != dim_) throw UsageError("dimension mismatch for gradient of '" + label_ + "'");
  Vec g = (*gradient_)(x);
  if (!g.allFinite()) throw OracleFault("non-finite gradient of '" + label_ + "' at " + describe(x), x);
  return g;
}

Vec Functional::gradient_or_fd(const Vec& x) const {
  if (gradient_) return (*gradient_)(x);
  return central_difference_gradient(*this, x);
}

Functional Functional::negated(std::string label) const {
  auto v = value_;
  std::optional<GradientFn> g;
  if (gradient_) {
    auto inner = *gradient_;
    g = [inner](const Vec& x) -> Vec { return -inner(x); };
  }
  Properties p;
  p.differentiable = props_.differentiable;
  return Functional(std::move(label), dim_, [v](const Vec& x) { return -v(x); }, std::move(g), p, domain_);
}

Functional Functional::with_domain(const Domain& domain) const {
  Functional copy = *this;
  copy.domain_ = domain;
  return copy;
}

double evaluate(const Functional& f, const Vec& x) { return f.value(x); }

Vec central_difference_gradient(const Functional& f, const Vec& x, double h) {
  Vec g(x.size());
  Vec xp = x;
  const Domain& dom = f.domain();
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double step = h * (1.0 + std::abs(x[i]));
    const double xi = x[i];
    double hi = xi + step;
    double lo = xi - step;
    // One-sided near a domain bound.
    if (hi > dom.upper()[i]) hi = xi;
    if (lo < dom.lower()[i]) lo = xi;
    xp[i] = hi;
    const double fp = f.value_unchecked(xp);
    xp[i] = lo;
    const double fm = f.value_unchecked(xp);
    xp[i] = xi;
    g[i] = (fp - fm) / (hi - lo);
  }
  return g;
}

GradientCheckReport check_gradient(const Functional& f, std::span<const Vec> points, double h, double tol_rel) {
  if (!f.has_gradient()) throw CapabilityError("check_gradient: '" + f.label() + "' has no gradient");
  if (!(h > 0.0)) throw UsageError("check_gradient: step must be positive");
  GradientCheckReport report;
  report.tol_rel = tol_rel;
  for (const Vec& x : points) {
    const Vec g = f.gradient(x);
    const Vec g_fd = central_difference_gradient(f, x, h);
    const double scale = std::max({g.lpNorm<Eigen::Infinity>(), g_fd.lpNorm<Eigen::Infinity>(), 1e-300});
    const double err = (g - g_fd).lpNorm<Eigen::Infinity>() / scale;
    report.errors.push_back(err);
    report.max_rel_error = std::max(report.max_rel_error, err);
  }
  report.passed = report.max_rel_error <= tol_rel;
  return report;
}

CoercivityProbe probe_coercivity(const Functional& f, std::vector<double> radii, std::uint64_t seed) {
  CoercivityProbe probe;
  probe.radii = radii;
  const int n = f.dim();
  std::vector<Vec> dirs;
  for (int i = 0; i < n; ++i) {
    dirs.push_back(Vec::Unit(n, i));
    dirs.push_back(-Vec::Unit(n, i));
  }
  Rng rng(seed, 0xc0e);
  for (int k = 0; k < 4; ++k) dirs.push_back(rng.unit_vector(n));

  const Domain& dom = f.domain();
  // Anchor inside the domain; for half-lines this is the finite corner.
  Vec anchor = dom.project(Vec::Zero(n));
  probe.increasing = true;
  for (const Vec& d : dirs) {
    std::vector<double> vals;
    bool inside = true;
    for (double r : radii) {
      Vec x = anchor + r * d;
      if (!dom.contains(x)) {
        inside = false;
        break;
      }
      vals.push_back(f.value(x));
    }
    if (!inside) continue;
    for (std::size_t k = 1; k < vals.size(); ++k) {
      if (!(vals[k] > vals[k - 1])) probe.increasing = false;
    }
    probe.values.push_back(std::move(vals));
  }
  if (probe.values.empty()) probe.increasing = false;
  return probe;
}

}  // namespace varprin
