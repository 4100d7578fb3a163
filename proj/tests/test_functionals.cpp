#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "varprin/builtins.hpp"
#include "varprin/errors.hpp"
#include "varprin/random.hpp"

using namespace varprin;

namespace {

Vec scalar(double x) { return Vec::Constant(1, x); }

std::vector<Vec> seeded_points(int dim, std::uint64_t seed, int count, double lo, double hi) {
  Rng rng(seed);
  std::vector<Vec> pts;
  for (int i = 0; i < count; ++i) {
    Vec x(dim);
    for (int j = 0; j < dim; ++j) x[j] = rng.uniform(lo, hi);
    pts.push_back(x);
  }
  return pts;
}

}  // namespace

TEST_CASE("evaluate returns oracle values") {
  CHECK(evaluate(builtin_functional("quad"), scalar(3.0)) == doctest::Approx(9.0));
  CHECK(evaluate(builtin_functional("linear_neg2"), scalar(1.5)) == doctest::Approx(-3.0));
  CHECK(evaluate(builtin_functional("osc_well"), scalar(0.0)) == 0.0);
}

TEST_CASE("evaluate rejects points outside the domain and wrong dimensions") {
  CHECK_THROWS_AS(evaluate(builtin_functional("linear"), scalar(-1.0)), Error);
  CHECK_THROWS_AS(evaluate(builtin_functional("quad"), Vec::Zero(2)), Error);
}

TEST_CASE("evaluate reports non-finite values as oracle faults") {
  Functional bad("bad", 1, [](const Vec&) { return std::nan(""); }, std::nullopt, {});
  CHECK_THROWS_AS(evaluate(bad, scalar(1.0)), OracleFault);
}

TEST_CASE("gradient check on closed-form builtins") {
  const std::vector<Vec> two = {scalar(1.0), scalar(-3.0)};
  GradientCheckReport q = check_gradient(builtin_functional("quad"), two);
  CHECK(q.passed);
  CHECK(q.max_rel_error < 1e-8);
  const std::vector<Vec> pos = {scalar(0.5), scalar(2.0), scalar(10.0)};
  GradientCheckReport l = check_gradient(builtin_functional("linear_neg2"), pos);
  CHECK(l.passed);
  CHECK(l.max_rel_error < 1e-9);
}

TEST_CASE("gradient consistency on 100 seeded points for every builtin") {
  for (const char* label : {"quad", "linear", "linear_neg2"}) {
    const double lo = std::string(label) == "quad" ? -5.0 : 0.0;
    CHECK_MESSAGE(check_gradient(builtin_functional(label), seeded_points(1, 1, 100, lo, 5.0)).passed, label);
  }
  // osc_well: |x| in [0.1, 2] keeps sin(1/x) resolvable by the step.
  std::vector<Vec> osc;
  Rng rng(7);
  for (int i = 0; i < 100; ++i) osc.push_back(scalar((rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.1, 2.0)));
  CHECK(check_gradient(builtin_functional("osc_well"), osc).passed);
  for (const char* label : {"QUAD", "OSC", "CONST", "ESCAPE"}) {
    FunctionalPair p = builtin_pair(label, 2.5);
    std::vector<Vec> pts = std::string(label) == "OSC" ? osc : seeded_points(1, 3, 100, -4.0, 4.0);
    CHECK_MESSAGE(check_gradient(p.phi, pts).passed, label);
    CHECK_MESSAGE(check_gradient(p.psi, pts).passed, label);
  }
  CHECK(check_gradient(oscillating_potential(), seeded_points(1, 4, 100, -50.0, 50.0)).passed);
  CHECK(check_gradient(quadratic_potential(3, 0.25), seeded_points(3, 5, 100, -5.0, 5.0)).passed);
  for (int dim : {1, 4, 10}) {
    FunctionalPair r = random_convex_quadratic_pair(dim, 11);
    CHECK(check_gradient(r.phi, seeded_points(dim, 6, 100, -3.0, 3.0)).passed);
    CHECK(check_gradient(r.psi, seeded_points(dim, 6, 100, -3.0, 3.0)).passed);
  }
}

TEST_CASE("gradient check flags a wrong gradient") {
  Functional wrong("wrong", 1, [](const Vec& x) { return x.squaredNorm(); }, [](const Vec& x) -> Vec { return 3.0 * x; },
                   {});
  const std::vector<Vec> pts = {scalar(1.0)};
  CHECK_FALSE(check_gradient(wrong, pts).passed);
}

TEST_CASE("OSC pair is continuous at the origin") {
  const Functional phi = builtin_pair("OSC").phi;
  Rng rng(9);
  for (int i = 0; i < 200; ++i) {
    const double x = rng.uniform(-1.0, 1.0) * std::pow(10.0, -rng.uniform(0.0, 6.0));
    CHECK(std::abs(phi.value(scalar(x))) <= 3.0 * x * x);
  }
}

TEST_CASE("builtin library contents") {
  FunctionalPair lin = builtin_pair("LINEAR");
  CHECK(lin.domain().kind() == Domain::Kind::halfspace_product);
  CHECK(lin.domain().lower()[0] == 0.0);
  CHECK(builtin_pair("QUAD").domain().kind() == Domain::Kind::all_space);
  CHECK_THROWS_AS(builtin_pair("NOPE"), UsageError);
  CHECK_THROWS_AS(builtin_potential("NOPE"), UsageError);
  bool has_linear = false, has_posc = false;
  for (const auto& b : list_builtins()) {
    has_linear |= b.label == "LINEAR";
    has_posc |= b.label == "P_osc";
  }
  CHECK(has_linear);
  CHECK(has_posc);
}

TEST_CASE("random pairs are deterministic per seed") {
  FunctionalPair a = random_convex_quadratic_pair(5, 42);
  FunctionalPair b = random_convex_quadratic_pair(5, 42);
  FunctionalPair c = random_convex_quadratic_pair(5, 43);
  const Vec x = Vec::LinSpaced(5, -1.0, 2.0);
  CHECK(a.phi.value(x) == b.phi.value(x));
  CHECK(a.psi.value(x) == b.psi.value(x));
  CHECK(a.phi.value(x) != c.phi.value(x));
  CHECK(a.psi.properties().coercive);
  CHECK(a.phi.properties().convex);
}

TEST_CASE("coercivity probe") {
  CHECK(probe_coercivity(builtin_functional("quad")).increasing);
  CHECK(probe_coercivity(random_convex_quadratic_pair(4, 1).psi).increasing);
  CHECK_FALSE(probe_coercivity(builtin_pair("ESCAPE").phi).increasing);
}

TEST_CASE("domain projection and containment") {
  Domain d = Domain::box(Vec::Constant(2, -1.0), Vec::Constant(2, 1.0));
  Vec x(2);
  x << 3.0, -0.5;
  CHECK_FALSE(d.contains(x));
  Vec p = d.project(x);
  CHECK(p[0] == 1.0);
  CHECK(p[1] == -0.5);
  CHECK(Domain::halfspace_product(Vec::Zero(2)).is_unbounded());
  CHECK_FALSE(d.is_unbounded());
}
