#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "varprin/errors.hpp"
#include "varprin/sublevel.hpp"

using namespace varprin;

namespace {

oracle::Pair1d quad_oracle(double rho) {
  return {[](double x) { return -x; }, [](double x) { return x * x; }, -std::sqrt(rho), std::sqrt(rho)};
}

oracle::Pair1d osc_oracle(double rho) {
  return {[](double x) { return x == 0.0 ? 0.0 : -x * x * (2.0 + std::sin(1.0 / x)); }, [](double x) { return x * x; },
          -std::sqrt(rho), std::sqrt(rho)};
}

}  // namespace

TEST_CASE("inf Psi estimates") {
  SearchOptions s;
  CHECK(estimate_inf_psi(builtin_pair("QUAD").psi, Domain::all_space(1), s).value == doctest::Approx(0.0).epsilon(1e-12));
  FunctionalPair lin = builtin_pair("LINEAR");
  CHECK(estimate_inf_psi(lin.psi, lin.domain(), s).value == doctest::Approx(0.0));
}

TEST_CASE("problem validation") {
  CHECK_THROWS_AS(SublevelProblem(builtin_pair("QUAD"), -1.0), PreconditionError);
  CHECK_THROWS_AS(SublevelProblem(builtin_pair("QUAD"), 0.0), PreconditionError);
  FunctionalPair flipped{"flip", builtin_pair("QUAD").psi, builtin_pair("QUAD").phi};
  CHECK_THROWS_AS(SublevelProblem(flipped, 1.0), PreconditionError);
}

TEST_CASE("alpha on closed-form pairs") {
  SublevelProblem lin(builtin_pair("LINEAR"), 1.0);
  MinimizeResult a = alpha(lin);
  CHECK(a.value == doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(a.x[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(a.constraint_active);
  SublevelProblem quad(builtin_pair("QUAD"), 4.0);
  CHECK(alpha(quad).value == doctest::Approx(-2.0).epsilon(1e-10));
}

TEST_CASE("phi closed forms") {
  SublevelProblem lin(builtin_pair("LINEAR"), 1.0);
  CHECK(phi_of_rho(lin).value == doctest::Approx(2.0).epsilon(1e-8));
  for (double rho : {1.0, 4.0, 64.0, 1024.0}) {
    SublevelProblem quad(builtin_pair("QUAD"), rho);
    CHECK(std::abs(phi_of_rho(quad).value - 1.0 / (2.0 * std::sqrt(rho))) <= 1e-6);
  }
  for (double c : {-3.0, 0.0, 7.0}) {
    SublevelProblem k(builtin_pair("CONST", c), 2.0);
    CHECK(std::abs(phi_of_rho(k).value) <= 1e-10);
  }
}

TEST_CASE("phi matches the brute-force ratio oracle on non-square levels") {
  for (double rho : {0.3, 2.0, 7.5}) {
    SublevelProblem quad(builtin_pair("QUAD"), rho);
    CHECK(phi_of_rho(quad).value == doctest::Approx(oracle::phi_ratio(quad_oracle(rho), rho)).epsilon(1e-6));
  }
  for (double rho : {0.01, 0.25}) {
    SublevelProblem osc(builtin_pair("OSC"), rho);
    const double ref = oracle::phi_ratio(osc_oracle(rho), rho);
    CHECK(phi_of_rho(osc).value == doctest::Approx(ref).epsilon(1e-5));
  }
}

TEST_CASE("beta closed form and oracle") {
  SublevelProblem quad(builtin_pair("QUAD"), 1.0);
  BetaResult b = beta(quad, 2.0);
  CHECK(std::abs(b.value + (1.0 + std::sqrt(3.0) / 2.0)) <= 1e-8);
  CHECK(b.x[0] == doctest::Approx(2.0 - std::sqrt(3.0)).epsilon(1e-7));
  for (double r : {1.5, 3.0, 10.0}) {
    CHECK(beta(quad, r).value == doctest::Approx(oracle::beta(quad_oracle(1.0), 1.0, r)).epsilon(1e-8));
  }
  SublevelProblem lin(builtin_pair("LINEAR"), 1.0);
  CHECK(beta(lin, 3.0).value == doctest::Approx(-3.0).epsilon(1e-8));
}

TEST_CASE("beta requires r > -alpha") {
  SublevelProblem lin(builtin_pair("LINEAR"), 1.0);
  CHECK_THROWS_AS(beta(lin, 1.0), PreconditionError);
  CHECK_THROWS_AS(beta(lin, 2.0), PreconditionError);
}

TEST_CASE("NEGATIVITY, MONOTONE-CONVEX and RATIO-BOUND on sampled triples") {
  for (const char* label : {"QUAD", "LINEAR", "OSC", "ESCAPE"}) {
    SublevelProblem p(builtin_pair(label), 1.0);
    const MinimizeResult a = alpha(p);
    const double base = -a.value;
    double prev = 0.0;
    std::vector<double> rs, bs;
    for (double off : {0.1, 0.3, 0.7, 1.5, 3.0, 6.0}) {
      const double r = base + off;
      const double b = beta(p, r, a, {}).value;
      CHECK_MESSAGE(b < 0.0, label);
      CHECK_MESSAGE(b <= (r + a.value) / (p.inf_psi().value - p.rho()) + 1e-10, label);
      if (!rs.empty()) CHECK_MESSAGE(b < prev, label);
      prev = b;
      rs.push_back(r);
      bs.push_back(b);
    }
    for (std::size_t i = 0; i + 2 < rs.size(); ++i) {
      const double t = (rs[i + 1] - rs[i]) / (rs[i + 2] - rs[i]);
      CHECK_MESSAGE(bs[i + 1] <= (1 - t) * bs[i] + t * bs[i + 2] + 1e-10, label);
    }
  }
}

TEST_CASE("solve_r0 closed forms and bisection oracle") {
  SublevelProblem quad(builtin_pair("QUAD"), 1.0);
  RootResult r = solve_r0(quad, 1.0 + std::sqrt(3.0) / 2.0);
  CHECK(std::abs(r.r0 - 2.0) <= 1e-8);
  CHECK(oracle::r0(quad_oracle(1.0), 1.0, 1.0 + std::sqrt(3.0) / 2.0, 1.0 + 1e-9, 10.0) ==
        doctest::Approx(2.0).epsilon(1e-8));
  CHECK(solve_r0(quad, 2.5).r0 == doctest::Approx(oracle::r0(quad_oracle(1.0), 1.0, 2.5, 1.0 + 1e-9, 10.0)).epsilon(1e-8));
  SublevelProblem lin(builtin_pair("LINEAR"), 1.0);
  CHECK(solve_r0(lin, 3.0).r0 == doctest::Approx(3.0).epsilon(1e-8));
  CHECK_THROWS_AS(solve_r0(lin, 1.0), PreconditionError);
}

TEST_CASE("constructive minimizer") {
  SublevelProblem quad(builtin_pair("QUAD"), 1.0);
  ConstructiveResult c = constructive_minimizer(quad, 1.0 + std::sqrt(3.0) / 2.0);
  CHECK(std::abs(c.record.x[0] - (2.0 - std::sqrt(3.0))) <= 1e-8);
  ConstructiveResult d = constructive_minimizer(quad, 1.5);
  CHECK(d.record.x[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-8));
  CHECK(d.discrepancy <= 1e-6);
  CHECK(d.record.grad_norm.value() <= 1e-6);
}

TEST_CASE("CONSTRUCTIVE-EQUIVALENCE on seeded random pairs") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int dim = 1 + static_cast<int>(seed % 10);
    FunctionalPair pair = random_convex_quadratic_pair(dim, seed);
    const PsiInfimum inf = estimate_inf_psi(pair.psi, pair.domain(), {});
    SublevelProblem p(pair, inf.value + 2.0);
    const PhiResult phi = phi_of_rho(p);
    CHECK(phi.value >= -1e-8);
    ConstructiveResult c = constructive_minimizer(p, phi.value + 0.5);
    const double v = c.record.value();
    CHECK(std::abs(v - c.direct.value) <= 1e-6 * (1.0 + std::abs(v)));
  }
}

TEST_CASE("constructive minimizer rejects lambda at or below phi") {
  SublevelProblem lin(builtin_pair("LINEAR"), 1.0);
  CHECK_THROWS_AS(constructive_minimizer(lin, 1.5), PreconditionError);
}
