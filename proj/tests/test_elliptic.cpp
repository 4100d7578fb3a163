#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "varprin/elliptic.hpp"
#include "varprin/errors.hpp"
#include "varprin/random.hpp"

using namespace varprin;

namespace {

EllipticConfig anchor(int N = 64) {
  EllipticConfig c;
  c.N = N;
  return c;
}

std::vector<Vec> grid_functions(int N, std::uint64_t seed, int count) {
  Rng rng(seed);
  std::vector<Vec> out;
  for (int k = 0; k < count; ++k) {
    Vec u(N);
    for (int i = 0; i < N; ++i) u[i] = rng.uniform(-2.0, 2.0);
    out.push_back(u);
  }
  return out;
}

const EllipticThreshold& anchor_threshold() {
  static const EllipticThreshold t = threshold_lambda_star(anchor());
  return t;
}

}  // namespace

TEST_CASE("config validation") {
  EllipticConfig c = anchor();
  c.N = 8;
  CHECK_THROWS_AS(c.validate(), UsageError);
  c = anchor();
  c.q = 4.0;
  CHECK_THROWS_AS(c.validate(), UsageError);
  c = anchor();
  c.s = 1.0;
  CHECK_THROWS_AS(c.validate(), UsageError);
  c = anchor();
  c.b = 0.0;
  CHECK_THROWS_AS(assemble(c), UsageError);
}

TEST_CASE("discrete energy two-interval hand evaluation") {
  CHECK(discrete_energy(Vec::Constant(1, 1.0), 0.5) == doctest::Approx(4.0));
  CHECK(discrete_energy(Vec::Zero(5), 0.1) == 0.0);
}

TEST_CASE("zero field and zero forcing") {
  EllipticConfig c = anchor(16);
  c.alpha_constant = 0.0;
  c.beta_constant = 0.0;
  FunctionalPair p = assemble(c);
  CHECK(p.phi.value(Vec::Zero(16)) == 0.0);
  CHECK(p.psi.value(Vec::Zero(16)) == 0.0);
  EllipticSolution s = newton_solve(c, 0.5, Vec::Zero(16));
  CHECK(s.residual_inf == 0.0);
  CHECK(s.u.norm() == 0.0);
}

TEST_CASE("GRADIENT-RESIDUAL LINK on random grid functions") {
  for (double a : {0.0, 0.7}) {
    EllipticConfig c = anchor();
    c.a = a;
    FunctionalPair p = assemble(c);
    for (double lambda : {0.3, 2.0}) {
      for (const Vec& u : grid_functions(c.N, 21, 10)) {
        const Vec g = p.psi.gradient(u) + lambda * p.phi.gradient(u);
        const Vec r = c.h() * pde_residual(c, u, lambda);
        CHECK((g - r).cwiseAbs().maxCoeff() <= 1e-12);
      }
    }
  }
}

TEST_CASE("GRADIENT VS FINITE DIFFERENCES") {
  EllipticConfig c = anchor(32);
  c.a = 0.5;
  FunctionalPair p = assemble(c);
  const std::vector<Vec> us = grid_functions(c.N, 5, 10);
  CHECK(check_gradient(p.phi, us).passed);
  CHECK(check_gradient(p.psi, us).passed);
}

TEST_CASE("COERCIVITY PROBE along five directions") {
  EllipticConfig c = anchor(32);
  c.a = 1.0;
  FunctionalPair p = assemble(c);
  for (const Vec& u : grid_functions(c.N, 8, 5)) {
    const double e = 0.5 * discrete_energy(u, c.h());
    double prev = -kInf;
    for (double t : {1e2, 1e3, 1e4}) {
      const double v = p.psi.value(t * u);
      CHECK(v > prev);
      CHECK(v / (t * t) == doctest::Approx(e).epsilon(1e-2));
      prev = v;
    }
  }
  CHECK(probe_coercivity(p.psi).increasing);
}

TEST_CASE("SIGN STRUCTURE of the positive-part term") {
  EllipticConfig c = anchor(16);
  for (const Vec& u : grid_functions(c.N, 3, 10)) {
    CHECK(positive_part_term(c, -u.cwiseAbs()) == 0.0);
    Vec v = -u.cwiseAbs();
    v[4] = 1e-3;
    CHECK(positive_part_term(c, v) > 0.0);
  }
}

TEST_CASE("threshold regression anchor at N=64") {
  const EllipticThreshold& t = anchor_threshold();
  CHECK(t.lambda_star > 0.0);
  CHECK_FALSE(t.all_lambda_admissible);
  CHECK(t.lambda_star == doctest::Approx(142.5830407).epsilon(0.01));
}

TEST_CASE("threshold is stable under refinement") {
  const double l16 = threshold_lambda_star(anchor(16)).lambda_star;
  const double l32 = threshold_lambda_star(anchor(32)).lambda_star;
  REQUIRE(std::isfinite(l16));
  REQUIRE(std::isfinite(l32));
  CHECK(std::abs(l16 - l32) <= 0.2 * std::max(l16, l32));
}

TEST_CASE("solve below the threshold reaches the PDE tolerance") {
  const EllipticThreshold& t = anchor_threshold();
  EllipticSolution s = solve(anchor(), 0.5 * t.lambda_star, t);
  CHECK(s.residual_inf <= 1e-8);
  CHECK(pde_residual(anchor(), s.u, s.lambda).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("continuation toward lambda = 0") {
  const EllipticThreshold& t = anchor_threshold();
  const double lambda = 1e-6;
  EllipticSolution s = solve(anchor(), lambda, t);
  CHECK(s.residual_inf <= 1e-8);
  // lambda = 0 with a = 0, alpha = 1: -u'' = 1, whose 3-point solution is x(1-x)/2 at the nodes.
  const EllipticConfig c = anchor();
  Vec u0(c.N);
  for (int i = 0; i < c.N; ++i) {
    const double x = (i + 1) * c.h();
    u0[i] = 0.5 * x * (1.0 - x);
  }
  CHECK((s.u - u0).cwiseAbs().maxCoeff() <= 10.0 * lambda);
}

TEST_CASE("unboundedness probes") {
  UnboundednessReport r = unbounded_below_probe(anchor(), 1.0, hat_function(64));
  CHECK(r.below.passed);
  CHECK(r.above.passed);
  CHECK_FALSE(r.mechanism_absent);
  EllipticConfig b0 = anchor();
  b0.b = 0.0;
  UnboundednessReport z = unbounded_below_probe(b0, 1.0, hat_function(64));
  CHECK(z.mechanism_absent);
  CHECK_FALSE(z.below.passed);
  CHECK(z.above.passed);
}

TEST_CASE("vanishing b with zero beta admits every lambda") {
  EllipticConfig c = anchor(16);
  c.b = 1e-300;
  c.beta_constant = 0.0;
  EllipticGrids g;
  g.up.K = 2;
  g.down.K = 2;
  EllipticThreshold t = threshold_lambda_star(c, g);
  CHECK(t.all_lambda_admissible);
  CHECK(std::isinf(t.lambda_star));
}
