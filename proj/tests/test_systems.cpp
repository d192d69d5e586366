#include "lpgreedy/rng.hpp"
#include "lpgreedy/systems.hpp"

#include <doctest.h>

#include <cmath>

using namespace lpgreedy;

TEST_CASE("canonical system") {
  for (int dim : {1, 3}) {
    for (double p : {1.5, 2.0, 3.0}) {
      LpSpace space(dim, p);
      SystemPtr sys = canonical_system(space);
      CHECK(sys->n_atoms() == dim);
      CHECK(sys->normalized());
      for (int j = 0; j < dim; ++j)
        CHECK(space.norm(sys->atoms().col(j)) == doctest::Approx(1.0).epsilon(1e-15));
    }
  }
}

TEST_CASE("random system is unit norm and deterministic") {
  LpSpace space(4, 2.5);
  SystemPtr a = random_system(space, 8, 1);
  SystemPtr b = random_system(space, 8, 1);
  SystemPtr c = random_system(space, 8, 2);
  CHECK(a->normalized());
  CHECK((a->atoms() - b->atoms()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a->atoms() - c->atoms()).cwiseAbs().maxCoeff() > 0.0);
  for (int j = 0; j < 8; ++j)
    CHECK(space.norm(a->atoms().col(j)) == doctest::Approx(1.0).epsilon(1e-13));
  SystemPtr single = random_system(LpSpace(2, 2.0), 1, 7);
  CHECK(single->n_atoms() == 1);
  CHECK(single->space().norm(single->atoms().col(0)) == doctest::Approx(1.0));
}

TEST_CASE("oversized atoms are rejected") {
  LpSpace space(2, 2.0);
  Mat atoms(2, 1);
  atoms << 1.5, 0.0;
  CHECK_THROWS_AS(SymmetricSystem(space, atoms), std::invalid_argument);
}

TEST_CASE("hull samples satisfy the coefficient constraint") {
  LpSpace space(6, 2.0);
  SystemPtr sys = random_system(space, 10, 3);
  for (double q : {1.0, 0.5, 0.3}) {
    for (std::uint64_t seed : {11ull, 12ull, 13ull}) {
      const CoefRepr r = sample_hull(sys, q, seed);
      CHECK(r.hull_mass() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SystemPtr one = random_system(LpSpace(2, 2.0), 1, 9);
  const CoefRepr r = sample_hull(one, 1.0, 5);
  CHECK(std::abs(r.coefs[0]) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(sample_hull(sys, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_hull(sys, 1.5, 1), std::invalid_argument);
}

TEST_CASE("synthesize") {
  LpSpace space(3, 2.0);
  SystemPtr sys = canonical_system(space);
  Vec c = Vec::Zero(3);
  c[0] = 1.0;
  CHECK((synthesize(CoefRepr{sys, c, 1.0}) - sys->atoms().col(0)).norm() == 0.0);
  CHECK(synthesize(CoefRepr{sys, Vec::Zero(3), 1.0}).norm() == 0.0);
  Vec two = Vec::Zero(3);
  two[0] = 0.5;
  two[1] = -0.5;
  CHECK(space.norm(synthesize(CoefRepr{sys, two, 1.0})) ==
        doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-14));
  CHECK_THROWS_AS(synthesize(CoefRepr{sys, Vec::Zero(2), 1.0}),
                  std::invalid_argument);
}

TEST_CASE("hull distance: membership, orthogonal offset, single atom") {
  SUBCASE("members of the hull have distance ~ 0") {
    LpSpace space(5, 2.0);
    SystemPtr sys = random_system(space, 9, 21);
    const Vec f = synthesize(sample_hull(sys, 1.0, 22));
    const HullDistance hd = hull_distance_l2(sys, f, 1e-16, 200000);
    CHECK(hd.upper <= 1e-6);
    CHECK(hd.lower <= hd.upper);
  }
  SUBCASE("orthogonal offset against direct projection") {
    // atoms supported on the first two coordinates, offset on the third
    LpSpace space(3, 2.0);
    Mat atoms = Mat::Zero(3, 2);
    atoms(0, 0) = 1.0;
    atoms(1, 1) = 1.0;
    SystemPtr sys = std::make_shared<SymmetricSystem>(space, atoms);
    Vec phi_star(3), v(3);
    phi_star << 0.3, -0.4, 0.0;  // in A_1: |0.3| + |0.4| <= 1
    v << 0.0, 0.0, 0.25;
    const HullDistance hd = hull_distance_l2(sys, phi_star + v, 1e-14, 100000);
    CHECK(hd.upper == doctest::Approx(0.25).epsilon(1e-5));
    CHECK(hd.lower == doctest::Approx(0.25).epsilon(1e-5));
    CHECK((synthesize(hd.witness) - phi_star).norm() < 1e-5);
  }
  SUBCASE("f = 2g against the segment [-g, g]") {
    LpSpace space(4, 2.0);
    SystemPtr sys = random_system(space, 1, 31);
    const Vec f = 2.0 * sys->atoms().col(0);
    const HullDistance hd = hull_distance_l2(sys, f, 1e-14, 1000);
    CHECK(hd.upper == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(hd.lower == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("canonical hull contains every f with ||f||_1 <= 1") {
    LpSpace space(4, 2.0);
    SystemPtr sys = canonical_system(space);
    Rng rng(77);
    for (int rep = 0; rep < 5; ++rep) {
      Vec f(4);
      for (int i = 0; i < 4; ++i) f[i] = rng.normal();
      f *= 0.995 / f.cwiseAbs().sum();
      const HullDistance hd = hull_distance_l2(sys, f, 1e-16, 200000);
      CHECK(hd.upper <= 1e-6);
    }
  }
}

TEST_CASE("hull distance certificates are ordered and monotone") {
  LpSpace space(6, 2.0);
  SystemPtr sys = random_system(space, 12, 41);
  Rng rng(42);
  Vec f(6);
  for (int i = 0; i < 6; ++i) f[i] = rng.normal();
  const HullDistance hd = hull_distance_l2(sys, f, 1e-12, 5000);
  REQUIRE(!hd.history.empty());
  for (std::size_t t = 0; t < hd.history.size(); ++t) {
    CHECK(hd.history[t].second <= hd.history[t].first + 1e-12);
    if (t > 0) CHECK(hd.history[t].first <= hd.history[t - 1].first + 1e-12);
  }
  // witness stays a valid hull member and reproduces the upper bound
  CHECK(hd.witness.hull_mass() <= 1.0 + 1e-9);
  CHECK(space.norm(f - synthesize(hd.witness)) ==
        doctest::Approx(hd.upper).epsilon(1e-10));
}

TEST_CASE("hull distance requires the Hilbert case") {
  LpSpace space(3, 3.0);
  SystemPtr sys = canonical_system(space);
  CHECK_THROWS_WITH_AS(
      hull_distance_l2(sys, Vec::Ones(3), 1e-8, 100),
      "hull_distance_l2: certified hull distance requires Hilbert case",
      std::invalid_argument);
}

TEST_CASE("system json round trip is bit exact") {
  LpSpace space(3, 2.5);
  SystemPtr sys = random_system(space, 5, 17);
  const std::string text = system_to_json(*sys);
  SystemPtr back = system_from_json(text);
  CHECK(back->space().dim() == 3);
  CHECK(back->space().lebesgue_p() == 2.5);
  CHECK((back->atoms() - sys->atoms()).cwiseAbs().maxCoeff() == 0.0);
}
