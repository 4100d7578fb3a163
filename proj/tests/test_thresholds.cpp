#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "varprin/errors.hpp"
#include "varprin/thresholds.hpp"

using namespace varprin;

namespace {

void check_lower_bound(const RatioCurve& c) {
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c.has_value(i)) CHECK(c.phi_values[i] >= -1e-8);
  }
}

}  // namespace

TEST_CASE("grid construction") {
  std::vector<double> up = make_grid({GridKind::geometric_up, 1.0, 10}, 0.0);
  REQUIRE(up.size() == 11);
  CHECK(up.front() == 1.0);
  CHECK(up.back() == 1024.0);
  std::vector<double> down = make_grid({GridKind::geometric_down_to_infimum, 3.0, 2}, 1.0);
  CHECK(down == std::vector<double>{3.0, 2.0, 1.5});
  CHECK_THROWS_AS(make_grid({GridKind::geometric_up, 0.0, 3}, 0.0), PreconditionError);
}

TEST_CASE("QUAD thresholds on the upward grid") {
  RatioCurve c = sweep(builtin_pair("QUAD"), {GridKind::geometric_up, 1.0, 10});
  for (std::size_t k = 0; k < c.size(); ++k) {
    REQUIRE(c.has_value(k));
    CHECK(std::abs(c.phi_values[k] - 1.0 / (2.0 * std::sqrt(c.rho_grid[k]))) <= 1e-6);
  }
  ThresholdEstimate ls = lambda_star(c);
  CHECK(ls.value == doctest::Approx(0.015625).epsilon(1e-6));
  CHECK(ls.direction == EstimateDirection::upper);
  ThresholdEstimate g = gamma_estimate(c);
  CHECK(g.value >= ls.value);
  check_lower_bound(c);
}

TEST_CASE("QUAD delta grows toward inf Psi") {
  RatioCurve d = sweep(builtin_pair("QUAD"), {GridKind::geometric_down_to_infimum, 1.0, 6});
  ThresholdEstimate de = delta_estimate(d);
  CHECK(de.diverging);
  check_lower_bound(d);
}

TEST_CASE("LINEAR threshold and GRID-MONOTONE") {
  RatioCurve coarse = sweep(builtin_pair("LINEAR"), {GridKind::geometric_up, 1.0, 4});
  RatioCurve fine = sweep(builtin_pair("LINEAR"), {GridKind::geometric_up, 0.5, 10});
  CHECK(std::abs(lambda_star(coarse).value - 2.0) <= 1e-6);
  CHECK(std::abs(lambda_star(fine).value - lambda_star(coarse).value) <= 1e-6);
  for (double v : fine.phi_values) CHECK(std::abs(v - 2.0) <= 1e-6);
}

TEST_CASE("GRID-MONOTONE on random convex pairs") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    FunctionalPair pair = random_convex_quadratic_pair(3, seed);
    RatioCurve coarse = sweep(pair, {GridKind::geometric_up, 1.0, 3});
    RatioCurve fine = sweep(pair, {GridKind::geometric_up, 1.0, 6});
    for (std::size_t k = 0; k < coarse.size(); ++k) {
      CHECK(std::abs(coarse.phi_values[k] - fine.phi_values[k]) <= 1e-6);
    }
    check_lower_bound(fine);
    RatioCurve wide = sweep(pair, {GridKind::geometric_up, 1.0, 8});
    CHECK(gamma_estimate(wide).value >= lambda_star(wide).value);
  }
}

TEST_CASE("OSC delta is small near the origin") {
  RatioCurve d = sweep(builtin_pair("OSC"), {GridKind::geometric_down_to_infimum, 1.0, 10});
  ThresholdEstimate de = delta_estimate(d);
  CHECK_FALSE(de.diverging);
  CHECK(de.value <= 0.5);
  check_lower_bound(d);
}

TEST_CASE("IDENTITY on every builtin pair and random pairs") {
  for (const char* label : {"LINEAR", "QUAD", "OSC", "CONST", "ESCAPE"}) {
    for (double rho : {1.0, 4.0}) {
      SublevelProblem p(builtin_pair(label, 2.0), rho);
      IdentityReport r = proof_identity_check(p);
      CHECK_MESSAGE(r.passed, label << " rho=" << rho << " gap=" << r.gap);
    }
  }
  for (std::uint64_t seed = 100; seed < 105; ++seed) {
    FunctionalPair pair = random_convex_quadratic_pair(1 + static_cast<int>(seed % 6), seed);
    SublevelProblem p(pair, estimate_inf_psi(pair.psi, pair.domain(), {}).value + 1.0);
    CHECK(proof_identity_check(p).passed);
  }
}

TEST_CASE("LINEAR dichotomy") {
  FunctionalPair pair = builtin_pair("LINEAR");
  RatioCurve c = sweep(pair, {GridKind::geometric_up, 1.0, 6});
  DichotomyReport r = convex_dichotomy_check(pair, c, 1.0, 3.0);
  CHECK(r.lambda_star == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(r.minimum_found);
  CHECK(std::abs(r.minimizer[0]) <= 1e-8);
  CHECK(r.escape_detected);
  CHECK(r.values_decreasing);
  CHECK(r.escape_norm >= 1e6);
  CHECK_FALSE(r.inconclusive);
}

TEST_CASE("QUAD dichotomy finds the unconstrained minimizer") {
  FunctionalPair pair = builtin_pair("QUAD");
  RatioCurve c = sweep(pair, {GridKind::geometric_up, 1.0, 10});
  DichotomyReport r = convex_dichotomy_check(pair, c, std::nullopt, 0.1);
  CHECK(r.minimum_found);
  CHECK(r.minimizer[0] == doctest::Approx(5.0).epsilon(1e-8));
}

TEST_CASE("dichotomy requires convexity") {
  FunctionalPair pair = builtin_pair("OSC");
  RatioCurve c = sweep(pair, {GridKind::geometric_up, 1.0, 2});
  CHECK_THROWS_AS(convex_dichotomy_check(pair, c, std::nullopt, 3.0), PreconditionError);
}
