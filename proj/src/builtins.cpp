#include "varprin/builtins.hpp"

#include <cmath>

#include "varprin/errors.hpp"
#include "varprin/random.hpp"

namespace varprin {

namespace {

Properties props(bool convex, bool coercive, bool differentiable = true) {
  Properties p;
  p.convex = convex;
  p.coercive = coercive;
  p.differentiable = differentiable;
  return p;
}

Domain nonnegative_line() { return Domain::halfspace_product(Vec::Zero(1)); }

Functional squared_norm(int dim, std::string label) {
  return Functional(
      std::move(label), dim, [](const Vec& x) { return x.squaredNorm(); }, [](const Vec& x) -> Vec { return 2.0 * x; },
      props(true, true));
}

Functional linear_neg2() {
  return Functional(
      "linear_neg2", 1, [](const Vec& x) { return -2.0 * x[0]; }, [](const Vec&) -> Vec { return Vec::Constant(1, -2.0); },
      props(true, false), nonnegative_line());
}

Functional linear_identity() {
  return Functional(
      "linear", 1, [](const Vec& x) { return x[0]; }, [](const Vec&) -> Vec { return Vec::Constant(1, 1.0); },
      props(true, true), nonnegative_line());
}

Functional osc_well() {
  // -x^2 (2 + sin(1/x)), extended by 0 at the origin.
  auto value = [](const Vec& x) {
    const double t = x[0];
    if (t == 0.0) return 0.0;
    return -t * t * (2.0 + std::sin(1.0 / t));
  };
  auto grad = [](const Vec& x) -> Vec {
    const double t = x[0];
    if (t == 0.0) return Vec::Zero(1);
    return Vec::Constant(1, -2.0 * t * (2.0 + std::sin(1.0 / t)) + std::cos(1.0 / t));
  };
  return Functional("osc_well", 1, value, grad, props(false, false));
}

Functional constant_functional(int dim, double c) {
  return Functional(
      "const", dim, [c](const Vec&) { return c; }, [dim](const Vec&) -> Vec { return Vec::Zero(dim); },
      props(true, false));
}

Functional escape_phi() {
  return Functional(
      "neg_quad_plus_linear", 1, [](const Vec& x) { return -x[0] * x[0] + x[0]; },
      [](const Vec& x) -> Vec { return Vec::Constant(1, -2.0 * x[0] + 1.0); }, props(false, false));
}

}  // namespace

std::vector<BuiltinInfo> list_builtins() {
  return {
      {"LINEAR", "pair", "λ*=2 (closed form); Phi=-2x, Psi=x on [0,inf), phi(rho)=2"},
      {"QUAD", "pair", "φ(ρ)=1/(2√ρ) (closed form); Phi=-x, Psi=x^2 on R, lambda*=0"},
      {"OSC", "pair", "Phi=-x^2(2+sin(1/x)), Phi(0)=0, Psi=x^2; accumulating critical points at 0"},
      {"CONST", "pair", "Phi=c, Psi=x^2; phi(rho)=0 (closed form)"},
      {"ESCAPE", "pair", "Phi=-x^2+x, Psi=x^2; Phi+lambda*Psi unbounded below for lambda<1"},
      {"RANDOM", "pair", "seeded convex quadratic pair (dim, seed)"},
      {"P_k", "potential", "P(x)=k*||x||^2; phi(rho)=k (closed form)"},
      {"P_osc", "potential", "growth-alternation witness, unbounded fixed-point set; P(x)=x^2/2+0.3x^2 sin(ln(1+x^2))"},
      {"P_zero", "potential", "P=0; only fixed point is 0"},
      {"linear_neg2", "functional", "-2x on [0,inf)"},
      {"linear", "functional", "x on [0,inf)"},
      {"quad", "functional", "x^2"},
      {"osc_well", "functional", "-x^2(2+sin(1/x)), 0 at x=0"},
  };
}

Functional builtin_functional(const std::string& label) {
  if (label == "linear_neg2") return linear_neg2();
  if (label == "linear") return linear_identity();
  if (label == "quad") return squared_norm(1, "quad");
  if (label == "osc_well") return osc_well();
  throw UsageError("unknown builtin functional '" + label + "' (available: linear_neg2, linear, quad, osc_well)");
}

FunctionalPair builtin_pair(const std::string& label, double constant) {
  if (label == "LINEAR") return {label, linear_neg2(), linear_identity()};
  if (label == "QUAD") {
    Functional phi(
        "neg_identity", 1, [](const Vec& x) { return -x[0]; }, [](const Vec&) -> Vec { return Vec::Constant(1, -1.0); },
        props(true, false));
    return {label, phi, squared_norm(1, "quad")};
  }
  if (label == "OSC") return {label, osc_well(), squared_norm(1, "quad")};
  if (label == "CONST") return {label, constant_functional(1, constant), squared_norm(1, "quad")};
  if (label == "ESCAPE") return {label, escape_phi(), squared_norm(1, "quad")};
  throw UsageError("unknown builtin pair '" + label + "' (available: LINEAR, QUAD, OSC, CONST, ESCAPE, RANDOM)");
}

Functional quadratic_potential(int dim, double k) {
  return Functional(
      "P_k", dim, [k](const Vec& x) { return k * x.squaredNorm(); }, [k](const Vec& x) -> Vec { return 2.0 * k * x; },
      props(k >= 0.0, false));
}

Functional oscillating_potential() {
  auto value = [](const Vec& x) {
    const double t2 = x[0] * x[0];
    return 0.5 * t2 + 0.3 * t2 * std::sin(std::log1p(t2));
  };
  auto grad = [](const Vec& x) -> Vec {
    const double t = x[0];
    const double t2 = t * t;
    const double L = std::log1p(t2);
    return Vec::Constant(1, t + 0.6 * t * std::sin(L) + 0.6 * t * t2 * std::cos(L) / (1.0 + t2));
  };
  return Functional("P_osc", 1, value, grad, props(false, false));
}

Functional builtin_potential(const std::string& label, int dim, double k) {
  if (label == "P_k") return quadratic_potential(dim, k);
  if (label == "P_osc") return oscillating_potential();
  if (label == "P_zero") return quadratic_potential(dim, 0.0);
  throw UsageError("unknown builtin potential '" + label + "' (available: P_k, P_osc, P_zero)");
}

FunctionalPair random_convex_quadratic_pair(int dim, std::uint64_t seed) {
  if (dim <= 0) throw UsageError("random pair dimension must be positive");
  Rng rng(seed, static_cast<std::uint64_t>(dim));
  Eigen::MatrixXd M(dim, dim), N(dim, dim);
  Vec b(dim), c(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) M(i, j) = rng.uniform(-1.0, 1.0);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) N(i, j) = rng.uniform(-1.0, 1.0);
  for (int i = 0; i < dim; ++i) b[i] = rng.uniform(-2.0, 2.0);
  for (int i = 0; i < dim; ++i) c[i] = rng.uniform(-1.0, 1.0);
  const Eigen::MatrixXd A = M.transpose() * M / dim;
  const Eigen::MatrixXd B = N.transpose() * N / dim + 0.5 * Eigen::MatrixXd::Identity(dim, dim);

  Functional phi(
      "rand_phi", dim, [A, b](const Vec& x) { return 0.5 * x.dot(A * x) + b.dot(x); },
      [A, b](const Vec& x) -> Vec { return A * x + b; }, props(true, false));
  Functional psi(
      "rand_psi", dim, [B, c](const Vec& x) { return 0.5 * x.dot(B * x) + c.dot(x); },
      [B, c](const Vec& x) -> Vec { return B * x + c; }, props(true, true));
  return {"RANDOM(" + std::to_string(dim) + "," + std::to_string(seed) + ")", phi, psi};
}

FunctionalPair hilbert_pair(const Functional& potential) {
  return {"HILBERT(" + potential.label() + ")", potential.negated("neg_" + potential.label()),
          squared_norm(potential.dim(), "norm_sq")};
}

}  // namespace varprin
