#include "lpgreedy/rng.hpp"
#include "lpgreedy/space.hpp"

#include <doctest.h>

#include <cmath>

using namespace lpgreedy;

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Vec random_unit(const LpSpace& space, Rng& rng) {
  Vec v(space.dim());
  for (int i = 0; i < space.dim(); ++i) v[i] = rng.normal();
  return v / space.norm(v);
}

}  // namespace

TEST_CASE("lp norm basics") {
  LpSpace s2(2, 2.0);
  CHECK(s2.norm(vec2(3.0, 4.0)) == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(s2.norm(Vec::Zero(2)) == 0.0);
  LpSpace s3(2, 3.0);
  CHECK(s3.norm(vec2(1.0, 1.0)) ==
        doctest::Approx(std::pow(2.0, 1.0 / 3.0)).epsilon(1e-12));
  CHECK_THROWS_AS((void)s2.norm(Vec::Zero(3)), std::invalid_argument);
  // quasi-norm path used by tail measures
  CHECK(lp_norm(vec2(1.0, 1.0), 0.5) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(lp_norm(vec2(-2.0, 1.0), std::numeric_limits<double>::infinity()) ==
        doctest::Approx(2.0));
}

TEST_CASE("space construction and derived exponents") {
  CHECK_THROWS_AS(LpSpace(2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(LpSpace(2, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(LpSpace(2, std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
  CHECK_THROWS_AS(LpSpace(0, 2.0), std::invalid_argument);

  LpSpace a(4, 1.5);
  CHECK(a.smooth_q() == doctest::Approx(1.5));
  CHECK(a.gamma() == doctest::Approx(1.0 / 1.5));
  CHECK(a.conj_p() == doctest::Approx(3.0));

  LpSpace b(4, 3.0);
  CHECK(b.smooth_q() == doctest::Approx(2.0));
  CHECK(b.gamma() == doctest::Approx(1.0));
  CHECK(b.conj_p() == doctest::Approx(2.0));

  for (double p : {1.2, 1.5, 2.0, 2.5, 3.0, 4.0}) {
    LpSpace s(3, p);
    CHECK(s.conj_p() ==
          doctest::Approx(std::max(p / (p - 1.0), 2.0)).epsilon(1e-14));
    CHECK(s.smooth_q() > 1.0);
    CHECK(s.smooth_q() <= 2.0);
  }
}

TEST_CASE("norming functional closed forms") {
  LpSpace s2(2, 2.0);
  Vec e1 = vec2(1.0, 0.0);
  CHECK((norming_functional(s2, e1) - e1).norm() < 1e-15);
  Vec g = norming_functional(s2, vec2(3.0, 4.0));
  CHECK(g[0] == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(g[1] == doctest::Approx(0.8).epsilon(1e-14));

  LpSpace s4(2, 4.0);
  Vec g4 = norming_functional(s4, vec2(1.0, 1.0));
  const double want = std::pow(2.0, -0.75);
  CHECK(g4[0] == doctest::Approx(want).epsilon(1e-14));
  CHECK(g4[1] == doctest::Approx(want).epsilon(1e-14));
  CHECK(lp_norm(g4, 4.0 / 3.0) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_WITH_AS(norming_functional(s2, Vec::Zero(2)),
                       "norming_functional: functional undefined at zero",
                       std::invalid_argument);
}

TEST_CASE("duality properties across p and dim") {
  Rng root(20240501);
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    for (int dim : {2, 10, 100}) {
      LpSpace space(dim, p);
      Rng rng = root.stream("duality-" + std::to_string(p) + "-" + std::to_string(dim));
      for (int rep = 0; rep < 60; ++rep) {
        Vec f(dim);
        for (int i = 0; i < dim; ++i) f[i] = rng.normal();
        if (space.norm(f) == 0.0) continue;
        const Vec g = norming_functional(space, f);
        const double fn = space.norm(f);
        CHECK(std::abs(g.dot(f) - fn) <= 1e-9 * fn);
        CHECK(std::abs(lp_norm(g, space.dual_p()) - 1.0) <= 1e-9);
        const Vec h = random_unit(space, rng);
        CHECK(std::abs(g.dot(h)) <= 1.0 + 1e-9);
      }
    }
  }
}

TEST_CASE("modulus of smoothness estimate") {
  SUBCASE("Hilbert closed form at u = 1") {
    LpSpace space(2, 2.0);
    const double exact = std::sqrt(2.0) - 1.0;
    const double est = modulus_smoothness_estimate(space, 1.0, 12, 7);
    CHECK(est <= exact + 1e-9);
    CHECK(est == doctest::Approx(exact).epsilon(1e-3));
  }
  SUBCASE("upper bounds gamma u^q") {
    {
      LpSpace space(3, 3.0);  // gamma = 1, q = 2
      const double est = modulus_smoothness_estimate(space, 0.1, 6, 3);
      CHECK(est <= 0.01 + 1e-9);
    }
    {
      LpSpace space(3, 1.5);  // gamma = 2/3, q = 1.5
      const double est = modulus_smoothness_estimate(space, 0.1, 6, 3);
      CHECK(est <= std::pow(0.1, 1.5) / 1.5 + 1e-9);
    }
  }
  SUBCASE("monotone in u and below the bound") {
    LpSpace space(4, 2.5);
    double prev = 0.0;
    for (double u : {0.05, 0.1, 0.2, 0.4, 0.8}) {
      const double est = modulus_smoothness_estimate(space, u, 4, 11);
      CHECK(est >= prev - 1e-9);
      CHECK(est <= space.gamma() * std::pow(u, space.smooth_q()) + 1e-9);
      prev = est;
    }
  }
}

TEST_CASE("segment_min worked values") {
  LpSpace space(2, 2.0);
  Vec f = vec2(0.5, 0.5);
  SUBCASE("from the origin to e1") {
    const SegmentMin r = segment_min(space, f, Vec::Zero(2), vec2(1.0, 0.0));
    CHECK(r.lambda == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("from (1/2, 0) to e2") {
    const SegmentMin r = segment_min(space, f, vec2(0.5, 0.0), vec2(0.0, 1.0));
    CHECK(r.lambda == doctest::Approx(0.4).epsilon(1e-9));
    CHECK(r.value == doctest::Approx(std::sqrt(0.05)).epsilon(1e-12));
  }
  SUBCASE("f equals the left endpoint") {
    const SegmentMin r = segment_min(space, f, f, vec2(1.0, 0.0));
    CHECK(r.lambda == 0.0);
    CHECK(r.value == 0.0);
  }
}

TEST_CASE("segment_min dominates a dense lambda grid") {
  Rng root(99);
  for (double p : {1.5, 2.0, 3.0}) {
    LpSpace space(6, p);
    Rng rng = root.stream("seg-" + std::to_string(p));
    for (int rep = 0; rep < 5; ++rep) {
      Vec f(6), a(6), b(6);
      for (int i = 0; i < 6; ++i) {
        f[i] = rng.normal();
        a[i] = rng.normal();
        b[i] = rng.normal();
      }
      const SegmentMin r = segment_min(space, f, a, b);
      CHECK(r.value <= space.norm(f - a) + 1e-12);
      CHECK(r.value <= space.norm(f - b) + 1e-12);
      for (int g = 0; g <= 10000; ++g) {
        const double lam = g / 10000.0;
        const double phi = space.norm(f - ((1.0 - lam) * a + lam * b));
        CHECK(r.value <= phi + 1e-8);
      }
    }
  }
}
