#include "lpgreedy/entropy.hpp"
#include "lpgreedy/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace lpgreedy;

TEST_CASE("grid nets: sizes, radii, worked cases") {
  SUBCASE("d=2, k=4 is a 4x4 grid at radius 1/4") {
    const EpsNet net = grid_net_ball(2, 4);
    CHECK(net.centers.size() == 16);
    CHECK(net.radius == doctest::Approx(0.25));
    CHECK(net.grid_bits == std::vector<int>{2, 2});
  }
  SUBCASE("d=1, k=0 is the single center 0 at radius 1") {
    const EpsNet net = grid_net_ball(1, 0);
    REQUIRE(net.centers.size() == 1);
    CHECK(net.centers[0][0] == 0.0);
    CHECK(net.radius == 1.0);
  }
  SUBCASE("d=3, k=3 is the 2x2x2 grid at radius 1/2") {
    const EpsNet net = grid_net_ball(3, 3);
    CHECK(net.centers.size() == 8);
    CHECK(net.radius == doctest::Approx(0.5));
  }
  SUBCASE("the entropy-number constant is never exceeded") {
    for (int d : {1, 2, 3, 4})
      for (int k = 0; k <= 12; ++k) {
        const EpsNet net = grid_net_ball(d, k);
        CHECK(net.centers.size() == (1ull << k));
        CHECK(net.radius <= 3.0 * std::pow(2.0, -static_cast<double>(k) / d));
      }
  }
}

TEST_CASE("grid locate matches brute force") {
  const EpsNet net = grid_net_ball(3, 7);
  Rng rng(55);
  for (int rep = 0; rep < 200; ++rep) {
    Vec x(3);
    for (int i = 0; i < 3; ++i) x[i] = 2.0 * rng.uniform() - 1.0;
    double best = 1e300;
    for (const Vec& c : net.centers) best = std::min(best, net.ambient.dist(x, c));
    CHECK(grid_net_distance(net, x) == doctest::Approx(best).epsilon(1e-13));
    CHECK(best <= net.radius);
  }
}

TEST_CASE("product composition") {
  SUBCASE("identity composition keeps the radius") {
    const EpsNet a = grid_net_ball(1, 1);
    EpsNet id;
    id.ambient = Ambient::linf(1);
    id.radius = 1.0;
    id.centers = {Vec::Zero(1)};
    const EpsNet c = compose_product_net(a, id);
    CHECK(c.radius == a.radius);
    CHECK(c.centers.size() == a.centers.size());
  }
  SUBCASE("two 2-point nets in 1-D give 4 centers at radius 1/4") {
    const EpsNet a = grid_net_ball(1, 1);  // centers ±1/2, radius 1/2
    const EpsNet c = compose_product_net(a, a);
    CHECK(c.centers.size() == 4);
    CHECK(c.radius == doctest::Approx(0.25));
    Rng rng(3);
    std::vector<Vec> pts;
    for (int i = 0; i < 2000; ++i) {
      Vec x(1);
      x[0] = 2.0 * rng.uniform() - 1.0;
      pts.push_back(x);
    }
    CHECK(coverage_max_distance(c, pts) <= c.radius + 1e-15);
  }
  SUBCASE("ambient mismatch is rejected") {
    CHECK_THROWS_AS(compose_product_net(grid_net_ball(1, 1), grid_net_ball(2, 2)),
                    std::invalid_argument);
  }
}

TEST_CASE("empirical entropy brackets") {
  LpSpace space(2, 2.0);
  SUBCASE("identical samples give zero upper bounds") {
    std::vector<Vec> samples(5, Vec::Zero(2));
    const auto curve = empirical_entropy_curve(samples, 3, space);
    for (const auto& pt : curve) CHECK(pt.eps_upper == 0.0);
  }
  SUBCASE("two points at distance 2") {
    std::vector<Vec> samples;
    samples.push_back((Vec(2) << 1.0, 0.0).finished());
    samples.push_back((Vec(2) << -1.0, 0.0).finished());
    const auto curve = empirical_entropy_curve(samples, 1, space);
    CHECK(curve[0].eps_upper == doctest::Approx(2.0));
    CHECK(curve[0].eps_lower == doctest::Approx(1.0));
    CHECK(curve[1].eps_upper == 0.0);
  }
  SUBCASE("curves are monotone and bracketed") {
    Rng rng(8);
    std::vector<Vec> samples;
    for (int i = 0; i < 500; ++i) {
      const double u = rng.uniform();
      Vec x(2);
      x[0] = rng.sign() * u * u;  // B_{1/2} boundary
      x[1] = rng.sign() * (1.0 - u) * (1.0 - u);
      samples.push_back(std::move(x));
    }
    const auto curve = empirical_entropy_curve(samples, 6, space);
    for (std::size_t i = 0; i < curve.size(); ++i) {
      CHECK(curve[i].eps_lower <= curve[i].eps_upper);
      if (i > 0) {
        CHECK(curve[i].eps_upper <= curve[i - 1].eps_upper + 1e-12);
        CHECK(curve[i].eps_lower <= curve[i - 1].eps_lower + 1e-12);
      }
    }
  }
}

TEST_CASE("multiscale budget formula") {
  const MultiscaleBudget b = MultiscaleBudget::make(3, 1.0, 2);
  CHECK(b.n_s == std::vector<int>{16, 16});
  CHECK(!b.proof_constraints_hold());  // toy scale: sum n_s far above 2^{l-1}
  const MultiscaleBudget tiny = MultiscaleBudget::make(12, 1.0, 2);
  CHECK(tiny.n_s == std::vector<int>{88, 160});
  CHECK_THROWS_AS(MultiscaleBudget::make(3, 1.0, 4), std::invalid_argument);
}

TEST_CASE("multiscale composer at the smallest scale") {
  // l = 2, r = 1, one 2-dim subspace per scale: n_1 = 8, n_2 = 0,
  // so |A| = 2^8 * 2^0 = 256 and the product can be materialized.
  const Ambient ambient = Ambient::linf(4);
  const MultiscaleBudget budget = MultiscaleBudget::make(2, 1.0, 2);
  REQUIRE(budget.n_s == std::vector<int>{8, 0});
  Mat b1 = Mat::Zero(4, 2), b2 = Mat::Zero(4, 2);
  b1(0, 0) = 1.0;
  b1(1, 1) = 1.0;
  b2(2, 0) = 1.0;
  b2(3, 1) = 1.0;
  std::vector<std::vector<SubspaceBallNet>> scales;
  scales.push_back({subspace_grid_net(ambient, b1, budget.n_s[0])});
  scales.push_back({subspace_grid_net(ambient, b2, budget.n_s[1])});
  const MultiscaleNet net =
      multiscale_compose(budget, std::move(scales), 1.0, {}, 100, 5);
  CHECK(net.size == 256);
  CHECK(net.certificate.max_observed <= net.radius);

  const std::vector<Vec> all = net.materialize();
  CHECK(all.size() == 256);

  // the per-scale assignment is an upper bound on the true distance to A,
  // and both stay within the recorded budget
  Rng rng(17);
  for (int rep = 0; rep < 40; ++rep) {
    const HrMember mem = sample_hr_member(net, rng);
    const double assigned = multiscale_assign_distance(net, mem);
    double brute = 1e300;
    for (const Vec& a : all) brute = std::min(brute, ambient.dist(mem.f, a));
    CHECK(assigned >= brute - 1e-12);
    CHECK(assigned <= net.radius + 1e-12);
  }

  // zero member is covered within the quantization part of the budget
  HrMember zero;
  zero.f = Vec::Zero(4);
  zero.t_by_scale = {Vec::Zero(4), Vec::Zero(4)};
  zero.subspace_choice = {0, 0};
  CHECK(multiscale_assign_distance(net, zero) <= net.radius);
}

TEST_CASE("subspace grid nets carry the operator-norm factor for general bases") {
  const Ambient amb = Ambient::linf(2);
  SUBCASE("coordinate block stays grid-exact") {
    Mat basis = Mat::Zero(2, 1);
    basis(1, 0) = 1.0;
    const SubspaceBallNet sb = subspace_grid_net(amb, basis, 3);
    CHECK(sb.net.certificate.kind == NetCertificate::Kind::GridExact);
    CHECK(sb.net.radius == doctest::Approx(0.125));
  }
  SUBCASE("scaled basis widens the radius") {
    Mat basis(2, 1);
    basis << 2.0, 0.0;
    const SubspaceBallNet sb = subspace_grid_net(amb, basis, 3);
    CHECK(sb.net.certificate.kind == NetCertificate::Kind::Sampled);
    CHECK(sb.net.radius == doctest::Approx(0.25));  // grid 1/8 times row-sum 2
    CHECK(sb.net.centers.size() == 8);
  }
}

TEST_CASE("multiscale composer validates its inputs") {
  const Ambient ambient = Ambient::linf(4);
  const MultiscaleBudget budget = MultiscaleBudget::make(2, 1.0, 2);
  Mat b1 = Mat::Zero(4, 2);
  b1(0, 0) = 1.0;
  b1(1, 1) = 1.0;
  SUBCASE("wrong net size") {
    std::vector<std::vector<SubspaceBallNet>> scales;
    scales.push_back({subspace_grid_net(ambient, b1, 3)});  // 8 != 2^{n_1}
    scales.push_back({subspace_grid_net(ambient, b1, 0)});
    CHECK_THROWS_AS(multiscale_compose(budget, std::move(scales), 1.0),
                    std::invalid_argument);
  }
  SUBCASE("r mismatch") {
    std::vector<std::vector<SubspaceBallNet>> scales;
    scales.push_back({subspace_grid_net(ambient, b1, budget.n_s[0])});
    scales.push_back({subspace_grid_net(ambient, b1, budget.n_s[1])});
    CHECK_THROWS_AS(multiscale_compose(budget, std::move(scales), 2.0),
                    std::invalid_argument);
  }
}

TEST_CASE("materialization guard") {
  MultiscaleNet net;
  net.ambient = Ambient::linf(2);
  net.budget = MultiscaleBudget::make(1, 1.0, 0);
  net.size = (1ull << 20) + 1;
  CHECK_THROWS_AS(net.materialize(), std::invalid_argument);
}

TEST_CASE("composed subspace-ball bound") {
  LpSpace space(2, 2.0);
  // a 1-center net for the l2 unit disc at radius 1
  EpsNet f_net;
  f_net.ambient = Ambient::lp(space);
  f_net.radius = 1.0;
  f_net.centers = {Vec::Zero(2)};
  const Mat basis = Mat::Identity(2, 2);
  const EpsNet c = composed_ball_entropy_bound(space, basis, f_net, 4);
  CHECK(c.centers.size() == 16);
  CHECK(c.radius == doctest::Approx(3.0 * 0.25));  // 3 * 2^{-4/2}
  Rng rng(23);
  std::vector<Vec> pts;
  for (int i = 0; i < 500; ++i) {
    Vec x(2);
    x[0] = rng.normal();
    x[1] = rng.normal();
    const double n = x.norm();
    if (n > 0.0) pts.push_back(x * (rng.uniform() / n));
  }
  CHECK(coverage_max_distance(c, pts) <= c.radius);
  SUBCASE("extra_k = 0 degenerates to a radius-3 blowup") {
    const EpsNet c0 = composed_ball_entropy_bound(space, basis, f_net, 0);
    CHECK(c0.radius == doctest::Approx(3.0));
    CHECK(c0.centers.size() == 1);
  }
  SUBCASE("bookkeeping mismatch is an error") {
    CHECK_THROWS_AS(composed_ball_entropy_bound(space, Mat::Identity(3, 2), f_net, 2),
                    std::invalid_argument);
  }
}

TEST_CASE("net json serialization") {
  const EpsNet net = grid_net_ball(2, 2);
  const std::string text = net_to_json(net);
  CHECK(text.find("\"dim\": 2") != std::string::npos);
  CHECK(text.find("\"p\": \"inf\"") != std::string::npos);
  CHECK(text.find("\"radius\": 0.5") != std::string::npos);
  CHECK(text.find("grid-exact") != std::string::npos);
}
