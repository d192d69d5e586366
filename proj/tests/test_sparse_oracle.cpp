#include "lpgreedy/rng.hpp"
#include "lpgreedy/sparse_oracle.hpp"

#include <doctest.h>

#include <cmath>

using namespace lpgreedy;

TEST_CASE("sigma_m_canonical closed forms") {
  Vec e1 = Vec::Zero(4);
  e1[0] = 1.0;
  for (double p : {1.0, 2.0, 3.0})
    CHECK(sigma_m_canonical(e1, 1, p).error == 0.0);

  Vec x(4);
  for (int j = 0; j < 4; ++j) x[j] = 1.0 / (j + 1.0);
  const MTermResult r = sigma_m_canonical(x, 2, 2.0);
  CHECK(r.error == doctest::Approx(std::sqrt(1.0 / 9.0 + 1.0 / 16.0)).epsilon(1e-14));
  CHECK(r.support == std::vector<int>{0, 1});

  CHECK(sigma_m_canonical(x, 0, 2.0).error == doctest::Approx(x.norm()));
  CHECK(sigma_m_canonical(x, 4, 2.0).error == 0.0);
  CHECK_THROWS_AS(sigma_m_canonical(x, 5, 2.0), std::invalid_argument);
}

TEST_CASE("sigma_m_canonical is non-increasing in m") {
  Rng rng(5);
  Vec x(8);
  for (int i = 0; i < 8; ++i) x[i] = rng.normal();
  for (double p : {0.5, 1.0, 2.0, 3.0}) {
    double prev = sigma_m_canonical(x, 0, p).error;
    for (int m = 1; m <= 8; ++m) {
      const double cur = sigma_m_canonical(x, m, p).error;
      CHECK(cur <= prev + 1e-14);
      prev = cur;
    }
    CHECK(prev == 0.0);
  }
}

TEST_CASE("canonical error meets the hull tail bound") {
  Rng root(31);
  for (double q : {0.5, 1.0}) {
    for (double p : {1.0, 2.0, 3.0}) {
      if (q > p) continue;
      Rng rng = root.stream("case");
      for (int rep = 0; rep < 40; ++rep) {
        Vec w(16);
        double tot = 0.0;
        for (int i = 0; i < 16; ++i) {
          w[i] = -std::log(rng.uniform_pos());
          tot += w[i];
        }
        Vec x(16);
        for (int i = 0; i < 16; ++i)
          x[i] = rng.sign() * std::pow(w[i] / tot, 1.0 / q);
        const int m = 1 + rng.uniform_int(0, 7);
        CHECK(sigma_m_canonical(x, m, p).error <=
              std::pow(m, 1.0 / p - 1.0 / q) + 1e-12);
      }
    }
  }
}

TEST_CASE("brute force agrees with the canonical oracle") {
  Rng root(12);
  SUBCASE("p = 2 certified") {
    for (int rep = 0; rep < 30; ++rep) {
      Rng rng = root.stream("p2-" + std::to_string(rep));
      const int dim = 4 + rng.uniform_int(0, 4);
      const int m = rng.uniform_int(0, 3);
      LpSpace space(dim, 2.0);
      Vec x(dim);
      for (int i = 0; i < dim; ++i) x[i] = rng.normal();
      const MTermResult a = sigma_m_canonical(x, m, 2.0);
      const MTermResult b = sigma_m_bruteforce(*canonical_system(space), x, m);
      CHECK(b.certified);
      CHECK(std::abs(a.error - b.error) <= 1e-10);
    }
  }
  SUBCASE("p != 2 within coordinate-descent slack") {
    for (double p : {1.5, 3.0}) {
      for (int rep = 0; rep < 6; ++rep) {
        Rng rng = root.stream("pq-" + std::to_string(p) + "-" + std::to_string(rep));
        const int dim = 5;
        LpSpace space(dim, p);
        Vec x(dim);
        for (int i = 0; i < dim; ++i) x[i] = rng.normal();
        const int m = 1 + rng.uniform_int(0, 1);
        const MTermResult a = sigma_m_canonical(x, m, p);
        const MTermResult b = sigma_m_bruteforce(*canonical_system(space), x, m);
        CHECK(!b.certified);
        CHECK(b.error <= a.error + 1e-8);
        CHECK(b.error >= a.error - 1e-8);
      }
    }
  }
}

TEST_CASE("brute force on structured instances") {
  LpSpace space(4, 2.0);
  SUBCASE("f in the span of one atom") {
    SystemPtr sys = random_system(space, 6, 3);
    const Vec f = 0.7 * sys->atoms().col(2);
    const MTermResult r = sigma_m_bruteforce(*sys, f, 1);
    CHECK(r.error <= 1e-12);
    CHECK(r.support == std::vector<int>{2});
  }
  SUBCASE("two orthonormal atoms, one term") {
    Mat atoms = Mat::Zero(4, 2);
    atoms(0, 0) = 1.0;
    atoms(1, 1) = 1.0;
    SymmetricSystem sys(space, atoms);
    const Vec f = atoms.col(0) + atoms.col(1);
    const MTermResult r = sigma_m_bruteforce(sys, f, 1);
    CHECK(r.error == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("combinatorial guard") {
    SystemPtr big = random_system(LpSpace(4, 2.0), 13, 1);
    CHECK_THROWS_WITH_AS(sigma_m_bruteforce(*big, Vec::Ones(4), 1),
                         "sigma_m_bruteforce: instance too large for brute force",
                         std::invalid_argument);
  }
}

TEST_CASE("tail bound worked values and properties") {
  SUBCASE("one-hot vector") {
    Vec x = Vec::Zero(8);
    x[3] = 1.0;
    for (int m : {1, 2, 5}) {
      const TailBound tb = tail_bound_check(x, m, 2.0, 1.0);
      CHECK(tb.lhs == 0.0);
      CHECK(tb.pass);
    }
  }
  SUBCASE("flat vector on the B_1 boundary") {
    Vec x = Vec::Constant(16, 1.0 / 16.0);
    const TailBound tb = tail_bound_check(x, 4, 2.0, 1.0);
    CHECK(tb.lhs == doctest::Approx(std::sqrt(12.0) / 16.0).epsilon(1e-14));
    CHECK(tb.rhs == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(tb.pass);
  }
  SUBCASE("q > p rejected") {
    CHECK_THROWS_AS(tail_bound_check(Vec::Ones(4), 1, 1.0, 2.0),
                    std::invalid_argument);
  }
  SUBCASE("hull samples never violate the bound") {
    Rng rng(71);
    for (int rep = 0; rep < 300; ++rep) {
      const double q = rep % 2 == 0 ? 1.0 : 0.5;
      const double p = rep % 3 == 0 ? 3.0 : 2.0;
      Vec w(24);
      double tot = 0.0;
      for (int i = 0; i < 24; ++i) {
        w[i] = -std::log(rng.uniform_pos());
        tot += w[i];
      }
      Vec x(24);
      for (int i = 0; i < 24; ++i)
        x[i] = rng.sign() * std::pow(w[i] / tot, 1.0 / q);
      const TailBound tb = tail_bound_check(x, 1 + rng.uniform_int(0, 9), p, q);
      CHECK(tb.pass);
    }
  }
}
