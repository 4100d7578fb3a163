#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "varprin/functional.hpp"

namespace varprin {

/// A pair (Phi, Psi) sharing one ambient space.
struct FunctionalPair {
  std::string label;
  Functional phi;
  Functional psi;

  int dim() const { return phi.dim(); }
  Domain domain() const { return phi.domain().intersect(psi.domain()); }
};

struct BuiltinInfo {
  std::string label;
  std::string kind;  // "pair", "potential" or "functional"
  std::string description;
};

/// Labels with one-line descriptions and closed-form reference values.
std::vector<BuiltinInfo> list_builtins();

/// Single functionals: "linear_neg2", "linear", "quad", "osc_well".
Functional builtin_functional(const std::string& label);

/// Pairs: "LINEAR", "QUAD", "OSC", "CONST", "ESCAPE". `constant` is the value
/// of Phi for CONST.
FunctionalPair builtin_pair(const std::string& label, double constant = 1.0);

/// P(x) = k ||x||^2 on R^dim.
Functional quadratic_potential(int dim, double k);
/// P(x) = x^2/2 + 0.3 x^2 sin(ln(1 + x^2)) on R.
Functional oscillating_potential();
/// "P_k" (needs dim, k), "P_osc", "P_zero".
Functional builtin_potential(const std::string& label, int dim = 1, double k = 0.25);

/// Phi(x) = x'Ax/2 + b'x with A positive semidefinite and
/// Psi(x) = x'Bx/2 + c'x with B positive definite; deterministic in (dim, seed).
FunctionalPair random_convex_quadratic_pair(int dim, std::uint64_t seed);

/// Phi = -P, Psi = ||x||^2: the pair whose critical points at lambda = 1/2 are
/// the fixed points of the potential operator P'.
FunctionalPair hilbert_pair(const Functional& potential);

}  // namespace varprin
