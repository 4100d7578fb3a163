#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "varprin/errors.hpp"
#include "varprin/fixed_points.hpp"

using namespace varprin;

namespace {

double p_osc(double x) { return 0.5 * x * x + 0.3 * x * x * std::sin(std::log1p(x * x)); }

const GrowthProfile& osc_profile() {
  static const GrowthProfile p = growth_profile(PotentialProblem(oscillating_potential()), log_radii(1.0, 1e4, 64));
  return p;
}

}  // namespace

TEST_CASE("quadratic potential: constant ratio and zero fixed point") {
  for (int dim : {1, 3}) {
    PotentialProblem p(quadratic_potential(dim, 0.25));
    for (double rho : {0.5, 4.0, 100.0}) CHECK(std::abs(phi_rho_hilbert(p, rho).value - 0.25) <= 1e-8);
    CriticalPointRecord fp = fixed_point_in_ball(p, 4.0);
    CHECK(fp.x.norm() <= 1e-8);
    CHECK(fp.kind == CriticalPointRecord::Kind::fixed_point);
  }
}

TEST_CASE("SPECIALIZATION CONSISTENCY") {
  for (const char* label : {"P_k", "P_osc", "P_zero"}) {
    PotentialProblem p(builtin_potential(label));
    for (double rho : {1.0, 10.0, 100.0}) {
      const SublevelOptions s = [] {
        SublevelOptions o;
        o.search.starts = 64;
        return o;
      }();
      const double direct = phi_of_rho(SublevelProblem(p.pair(), rho, s), s).value;
      CHECK_MESSAGE(std::abs(phi_rho_hilbert(p, rho).value - direct) <= 1e-8, label << " rho=" << rho);
    }
  }
}

TEST_CASE("ball fixed point requires phi below one half") {
  PotentialProblem half(quadratic_potential(1, 0.5));
  CHECK_THROWS_AS(fixed_point_in_ball(half, 4.0), PreconditionError);
  CHECK_THROWS_AS(PotentialProblem(Functional("nograd", 1, [](const Vec&) { return 0.0; }, std::nullopt, {})),
                  CapabilityError);
}

TEST_CASE("P_osc ball fixed point matches the root oracle") {
  const std::vector<double> roots = oracle::p_osc_fixed_points(10.0);
  REQUIRE_FALSE(roots.empty());
  CriticalPointRecord fp = fixed_point_in_ball(PotentialProblem(oscillating_potential()), 100.0);
  CHECK(std::abs(fp.x[0]) == doctest::Approx(roots.front()).epsilon(1e-8));
  CHECK(PotentialProblem(oscillating_potential()).residual(fp.x) <= 1e-8);
}

TEST_CASE("P_osc growth profile matches the dense oracle and alternates") {
  const GrowthProfile& p = osc_profile();
  for (std::size_t i = 0; i < p.radii.size(); i += 7) {
    CHECK(p.ratios[i] == doctest::Approx(oracle::p_osc_profile(p.radii[i])).epsilon(1e-6));
  }
  CHECK(p.alternations >= 3);
  CHECK(p.exhibits_alternation);
  CHECK(*std::min_element(p.ratios.begin(), p.ratios.end()) < 0.25);
  CHECK(*std::max_element(p.ratios.begin(), p.ratios.end()) > 0.75);
}

TEST_CASE("growth condition at the detected peaks") {
  const GrowthProfile& p = osc_profile();
  REQUIRE_FALSE(p.peaks.empty());
  for (std::size_t i : p.peaks) {
    const double x = p.argsup[i][0];
    CHECK(p_osc(x) - 0.5 * x * x >= 0.2 * x * x);
  }
  CHECK(p.tail_min.back() < 0.5);
}

TEST_CASE("quadratic potential profile does not alternate") {
  GrowthProfile p = growth_profile(PotentialProblem(quadratic_potential(1, 0.25)), log_radii(1.0, 100.0, 16));
  for (double r : p.ratios) CHECK(r == doctest::Approx(0.25).epsilon(1e-10));
  CHECK_FALSE(p.exhibits_alternation);
  CHECK_THROWS_AS(growth_profile(PotentialProblem(quadratic_potential(1, 0.25)), log_radii(1.0, 100.0, 8)),
                  PreconditionError);
}

TEST_CASE("P_osc hunt returns three growing fixed points") {
  PotentialProblem prob(oscillating_potential());
  HuntResult h = unbounded_fixed_point_hunt(prob, 3, osc_profile());
  REQUIRE(h.records.size() == 3);
  CHECK(h.complete);
  const std::vector<double> roots = oracle::p_osc_fixed_points(1e4);
  for (std::size_t i = 0; i < 3; ++i) {
    const double n = h.records[i].x.norm();
    CHECK(prob.residual(h.records[i].x) <= 1e-8);
    double nearest = roots.front();
    for (double r : roots) {
      if (std::abs(r - n) < std::abs(nearest - n)) nearest = r;
    }
    CHECK(n == doctest::Approx(nearest).epsilon(1e-8));
    if (i > 0) CHECK(n >= 1.2 * h.records[i - 1].x.norm());
  }
  CHECK(std::abs(h.records[0].x.norm() - roots.front()) <= 0.05 * roots.front());
}

TEST_CASE("hunt without the growth hypothesis is partial") {
  PotentialProblem quarter(quadratic_potential(1, 0.25));
  GrowthProfile p = growth_profile(quarter, log_radii(1.0, 100.0, 16));
  HuntResult h = unbounded_fixed_point_hunt(quarter, 1, p);
  CHECK(h.records.size() == 1);
  CHECK_FALSE(h.complete);

  PotentialProblem identity(quadratic_potential(1, 0.5));
  HuntResult all = unbounded_fixed_point_hunt(identity, 3, growth_profile(identity, log_radii(1.0, 100.0, 16)));
  REQUIRE(all.records.size() == 3);
  for (std::size_t i = 1; i < 3; ++i) CHECK(all.records[i].x.norm() > all.records[i - 1].x.norm());
}
