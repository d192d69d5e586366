#include "lpgreedy/harness.hpp"

#include "lpgreedy/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace lpgreedy {

namespace {

std::string pass_str(bool b) { return b ? "pass" : "FAIL"; }

Vec random_gaussian(int dim, Rng& rng) {
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v[i] = rng.normal();
  return v;
}

}  // namespace

double SuiteOutcome::metric(const std::string& name, double fallback) const {
  for (const auto& [k, v] : metrics)
    if (k == name) return v;
  return fallback;
}

SuiteOutcome run_duality_suite(const DualityParams& prm) {
  SuiteOutcome out;
  Rng root = Rng(prm.seed).stream("duality");
  CsvWriter csv({"case", "dim", "p", "pairing_err", "dual_norm_err", "bound_excess"});
  double worst_pairing = 0.0, worst_dual = 0.0, worst_bound = 0.0;
  for (int i = 0; i < prm.pairs; ++i) {
    const int dim = prm.dims[static_cast<std::size_t>(i) % prm.dims.size()];
    const double p =
        prm.p_list[(static_cast<std::size_t>(i) / prm.dims.size()) % prm.p_list.size()];
    const LpSpace space(dim, p);
    Rng rng = root.stream("pair-" + std::to_string(i));
    Vec f = random_gaussian(dim, rng);
    if (space.norm(f) == 0.0) f[0] = 1.0;
    const Vec g = norming_functional(space, f);
    const double fn = space.norm(f);
    const double pairing_err = std::abs(g.dot(f) - fn) / fn;
    const double dual_norm_err = std::abs(lp_norm(g, space.dual_p()) - 1.0);
    Vec h = random_gaussian(dim, rng);
    const double hn = space.norm(h);
    double bound_excess = 0.0;
    if (hn > 0.0) bound_excess = std::abs(g.dot(h / hn)) - 1.0;
    worst_pairing = std::max(worst_pairing, pairing_err);
    worst_dual = std::max(worst_dual, dual_norm_err);
    worst_bound = std::max(worst_bound, bound_excess);
    csv.row({static_cast<double>(i), static_cast<double>(dim), p, pairing_err,
             dual_norm_err, bound_excess});
  }
  out.pass = worst_pairing <= prm.tol && worst_dual <= prm.tol && worst_bound <= prm.tol;
  out.detail = "max pairing err " + format_g17(worst_pairing) + ", max dual norm err " +
               format_g17(worst_dual) + ", max |F(h)|-1 " + format_g17(worst_bound);
  out.metrics = {{"worst_pairing", worst_pairing},
                 {"worst_dual", worst_dual},
                 {"worst_bound", worst_bound}};
  out.artifacts.emplace_back("duality.csv", csv.str());
  return out;
}

SuiteOutcome run_worked_example(double tol) {
  SuiteOutcome out;
  const LpSpace space(2, 2.0);
  SystemPtr system = canonical_system(space);
  Vec f(2);
  f << 0.5, 0.5;
  const GreedyTrace tr = wrga_run(system, f, WeaknessSequence::constant(1.0), 2,
                                  WrgaOptions{SelectPolicy::Exact, 0.0, 0, 1e-13});
  CsvWriter csv({"step", "atom_index", "lambda", "residual_norm"});
  for (const auto& r : tr.records)
    csv.row({static_cast<double>(r.step), static_cast<double>(r.atom_index),
             r.lambda, r.residual_norm});
  bool ok = tr.records.size() == 2;
  std::string why;
  if (ok) {
    const auto& r1 = tr.records[0];
    const auto& r2 = tr.records[1];
    const double want_r2 = std::sqrt(0.05);
    ok = r1.atom_index == 0 && std::abs(r1.lambda - 0.5) <= tol &&
         std::abs(r1.residual_norm - 0.5) <= tol && r2.atom_index == 1 &&
         std::abs(r2.lambda - 0.4) <= tol &&
         std::abs(r2.residual_norm - want_r2) <= tol;
    why = "residuals (" + format_g17(r1.residual_norm) + ", " +
          format_g17(r2.residual_norm) + "), lambdas (" + format_g17(r1.lambda) +
          ", " + format_g17(r2.lambda) + ")";
    const Vec want_g2 = (Vec(2) << 0.3, 0.4).finished();
    ok = ok && (tr.approximant - want_g2).norm() <= tol;
  } else {
    why = "trace truncated";
  }
  out.pass = ok;
  out.detail = why;
  out.artifacts.emplace_back("worked_example.csv", csv.str());
  out.artifacts.emplace_back("worked_example_trace.jsonl", trace_to_jsonl(tr));
  return out;
}

SuiteOutcome run_recursion_suite(const RecursionSuiteParams& prm) {
  SuiteOutcome out;
  Rng seeder = Rng(prm.seed).stream("recursion-suite");
  CsvWriter step_csv({"run", "p", "t", "step", "a_m", "grid_rhs", "case_rhs",
                      "c5_rhs", "pass"});
  CsvWriter fit_csv({"run", "p", "t", "slope", "target", "slack", "pass"});
  int violations = 0, checked = 0, rate_failures = 0;
  double worst_margin = -1e300;
  for (int run = 0; run < prm.runs; ++run) {
    const double p = prm.p_list[static_cast<std::size_t>(run) % prm.p_list.size()];
    const double t =
        prm.tau_list[(static_cast<std::size_t>(run) / prm.p_list.size()) % prm.tau_list.size()];
    const LpSpace space(prm.dim, p);
    const std::uint64_t sys_seed = seeder.next_u64();
    const std::uint64_t f_seed = seeder.next_u64();
    SystemPtr system = random_system(space, prm.n_atoms, sys_seed);
    const CoefRepr repr = sample_hull(system, 1.0, f_seed);
    const Vec f = synthesize(repr);  // f in A_1(D), so b = 0
    const WeaknessSequence tau = WeaknessSequence::constant(t);
    WrgaOptions opts;
    opts.policy = t < 1.0 ? SelectPolicy::LazyWeak : SelectPolicy::Exact;
    opts.b = 0.0;
    const GreedyTrace tr = wrga_run(system, f, tau, prm.m_max, opts);
    const RecursionReport rep = recursion_check(tr, space, tau, prm.tol);
    checked += rep.n_checked;
    violations += rep.n_failed;
    for (const auto& s : rep.steps) {
      if (!s.checked) continue;
      step_csv.row({static_cast<double>(run), p, t, static_cast<double>(s.step),
                    s.a_m, s.grid_rhs, s.case_rhs, s.c5_rhs,
                    s.pass ? 1.0 : 0.0});
    }
    // one-sided decay fit: slope must not exceed -1/p* + slack
    std::vector<std::pair<double, double>> curve;
    for (const auto& r : tr.records)
      curve.emplace_back(static_cast<double>(r.step), r.a_m);
    const double target = -1.0 / space.conj_p();
    bool fit_ok = true;
    double slope = 0.0;
    try {
      const RateFit fit =
          fit_rate(curve, target, prm.fit_slack, prm.fit_m_lo, prm.fit_m_hi);
      slope = fit.slope;
      fit_ok = fit.slope <= target + prm.fit_slack;
      worst_margin = std::max(worst_margin, fit.slope - (target + prm.fit_slack));
    } catch (const std::invalid_argument&) {
      // residual hit the numeric floor inside the fit window
      slope = -1e300;
      fit_ok = true;
    }
    if (!fit_ok) ++rate_failures;
    fit_csv.row({static_cast<double>(run), p, t, slope, target, prm.fit_slack,
                 fit_ok ? 1.0 : 0.0});
  }
  out.metrics = {{"violations", static_cast<double>(violations)},
                 {"checked", static_cast<double>(checked)},
                 {"rate_failures", static_cast<double>(rate_failures)},
                 {"worst_slope_margin", worst_margin}};
  out.pass = violations == 0 && rate_failures == 0;
  out.detail = std::to_string(violations) + " recursion violations over " +
               std::to_string(checked) + " checked steps; " +
               std::to_string(rate_failures) + " rate-fit failures";
  out.artifacts.emplace_back("recursion_steps.csv", step_csv.str());
  out.artifacts.emplace_back("recursion_fits.csv", fit_csv.str());
  return out;
}

SuiteOutcome run_hilbert_suite(const HilbertSuiteParams& prm) {
  SuiteOutcome out;
  Rng seeder = Rng(prm.seed).stream("hilbert-suite");
  CsvWriter csv({"run", "max_m_r2"});
  double worst = 0.0;
  for (int run = 0; run < prm.runs; ++run) {
    const LpSpace space(prm.dim, 2.0);
    SystemPtr system = random_system(space, prm.n_atoms, seeder.next_u64());
    const Vec f = synthesize(sample_hull(system, 1.0, seeder.next_u64()));
    const GreedyTrace tr =
        wrga_run(system, f, WeaknessSequence::constant(1.0), prm.m_max);
    double run_max = 0.0;
    for (const auto& r : tr.records)
      run_max = std::max(run_max, r.step * r.residual_norm * r.residual_norm);
    worst = std::max(worst, run_max);
    csv.row({static_cast<double>(run), run_max});
  }
  out.metrics = {{"max_m_r2", worst}};
  out.pass = worst <= prm.bound;
  out.detail = "max m*||f_m||^2 = " + format_g17(worst) + " (bound " +
               format_g17(prm.bound) + ")";
  out.artifacts.emplace_back("hilbert_bound.csv", csv.str());
  return out;
}

OffsetInstance make_offset_instance(int dim, int span_dim, int n_atoms,
                                    double offset_norm, std::uint64_t seed) {
  if (span_dim < 1 || span_dim >= dim)
    throw std::invalid_argument("make_offset_instance: need 1 <= span_dim < dim");
  Rng root = Rng(seed).stream("offset-instance");
  const LpSpace inner(span_dim, 2.0);
  SystemPtr small = random_system(inner, n_atoms, root.next_u64());
  Mat atoms = Mat::Zero(dim, n_atoms);
  atoms.topRows(span_dim) = small->atoms();
  const LpSpace space(dim, 2.0);
  SystemPtr system = std::make_shared<SymmetricSystem>(space, std::move(atoms));
  const Vec phi_star = synthesize(sample_hull(system, 1.0, root.next_u64()));
  Rng vr = root.stream("orthogonal-part");
  Vec v = Vec::Zero(dim);
  for (int i = span_dim; i < dim; ++i) v[i] = vr.normal();
  v *= offset_norm / v.norm();
  return OffsetInstance{std::move(system), phi_star + v, offset_norm};
}

SuiteOutcome run_offset_suite(const OffsetParams& prm) {
  SuiteOutcome out;
  const OffsetInstance inst = make_offset_instance(
      prm.dim, prm.span_dim, prm.n_atoms, prm.offset_norm, prm.seed);
  const LpSpace space(prm.dim, 2.0);
  const WeaknessSequence tau = WeaknessSequence::constant(1.0);
  WrgaOptions opts;
  opts.b = inst.b;
  const GreedyTrace tr = wrga_run(inst.system, inst.f, tau, prm.m_max, opts);
  const RecursionReport rep = recursion_check(tr, space, tau, prm.recursion_tol);
  CsvWriter csv({"step", "residual_norm", "a_m", "recursion_rhs"});
  for (const auto& r : tr.records)
    csv.row({static_cast<double>(r.step), r.residual_norm, r.a_m, r.recursion_rhs});
  const double final_gap =
      tr.records.empty() ? 1e300
                         : std::abs(tr.records.back().residual_norm - inst.b);
  out.metrics = {{"final_gap", final_gap},
                 {"violations", static_cast<double>(rep.n_failed)},
                 {"b", inst.b}};
  out.pass = final_gap <= prm.final_tol && rep.n_failed == 0;
  out.detail = "| ||f_m|| - b | = " + format_g17(final_gap) + " at m = " +
               std::to_string(prm.m_max) + ", " + std::to_string(rep.n_failed) +
               " recursion violations";
  out.artifacts.emplace_back("offset_curve.csv", csv.str());
  return out;
}

SuiteOutcome run_sigma_suite(const SigmaSuiteParams& prm) {
  SuiteOutcome out;
  Rng root = Rng(prm.seed).stream("sigma-suite");
  CsvWriter agree_csv({"case", "dim", "m", "canonical_err", "bruteforce_err", "diff"});
  double max_disagreement = 0.0;
  for (int i = 0; i < prm.agreement_seeds; ++i) {
    Rng rng = root.stream("agree-" + std::to_string(i));
    const int dim = 4 + rng.uniform_int(0, prm.max_dim - 4);
    const int m = rng.uniform_int(0, prm.max_m);
    const LpSpace space(dim, 2.0);
    SystemPtr system = canonical_system(space);
    const Vec x = random_gaussian(dim, rng);
    const MTermResult a = sigma_m_canonical(x, m, 2.0);
    const MTermResult b = sigma_m_bruteforce(*system, x, m);
    const double diff = std::abs(a.error - b.error);
    max_disagreement = std::max(max_disagreement, diff);
    agree_csv.row({static_cast<double>(i), static_cast<double>(dim),
                   static_cast<double>(m), a.error, b.error, diff});
  }
  CsvWriter tail_csv({"case", "q", "p", "m", "lhs", "rhs", "pass"});
  int tail_failures = 0;
  const LpSpace tail_space(prm.tail_dim, 2.0);
  SystemPtr tail_system = canonical_system(tail_space);
  Rng tail_rng = root.stream("tail");
  for (int i = 0; i < prm.tail_samples; ++i) {
    const auto& [q, p] =
        prm.tail_pairs[static_cast<std::size_t>(i) % prm.tail_pairs.size()];
    const CoefRepr repr = sample_hull(tail_system, q, tail_rng.next_u64());
    const int m = 1 + tail_rng.uniform_int(0, 15);
    const TailBound tb = tail_bound_check(repr.coefs, m, p, q);
    if (!tb.pass) ++tail_failures;
    tail_csv.row({static_cast<double>(i), q, p, static_cast<double>(m), tb.lhs,
                  tb.rhs, tb.pass ? 1.0 : 0.0});
  }
  out.metrics = {{"max_disagreement", max_disagreement},
                 {"tail_failures", static_cast<double>(tail_failures)}};
  out.pass = max_disagreement <= prm.agreement_tol && tail_failures == 0;
  out.detail = "max oracle disagreement " + format_g17(max_disagreement) + ", " +
               std::to_string(tail_failures) + " tail-bound failures";
  out.artifacts.emplace_back("sigma_agreement.csv", agree_csv.str());
  out.artifacts.emplace_back("tail_bound.csv", tail_csv.str());
  return out;
}

namespace {

CoefRepr flat_support_member(SystemPtr system, double q, int support, Rng& rng) {
  const int n = system->n_atoms();
  support = std::clamp(support, 1, n);
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  for (int t = 0; t < support; ++t) {
    const int j = t + rng.uniform_int(0, n - 1 - t);
    std::swap(idx[static_cast<std::size_t>(t)], idx[static_cast<std::size_t>(j)]);
  }
  const double mag = std::pow(static_cast<double>(support), -1.0 / q);
  Vec c = Vec::Zero(n);
  for (int t = 0; t < support; ++t)
    c[idx[static_cast<std::size_t>(t)]] = rng.sign() * mag;
  return CoefRepr{std::move(system), std::move(c), q};
}

}  // namespace

SuiteOutcome run_hull_rate(const HullRateParams& prm) {
  SuiteOutcome out;
  CsvWriter curve_csv({"system", "q", "p", "m", "max_error"});
  CsvWriter fit_csv({"scope", "system", "q", "p", "slope", "target", "slack", "pass"});
  // system column: 0 = canonical, 1 = random, 2 = pooled
  bool all_ok = true;
  double worst_dev = 0.0;
  std::string worst_case;
  for (double q : prm.q_list) {
    for (double p : prm.p_list) {
      const double target = -(1.0 / q - std::max(0.5, 1.0 / p));
      std::vector<double> pooled_max(prm.m_list.size(), 0.0);
      for (std::size_t si = 0; si < prm.systems.size(); ++si) {
        const std::string& sys_kind = prm.systems[si];
        const LpSpace space(prm.dim, p);
        const std::string label = sys_kind + "-q" + format_g17(q) + "-p" + format_g17(p);
        Rng seeder = Rng(prm.seed).stream("hull-rate-" + label);
        SystemPtr system = sys_kind == "canonical"
                               ? canonical_system(space)
                               : random_system(space, prm.n_atoms, seeder.next_u64());
        // draw the sample set once; half generic hull samples, half
        // flat-support members with log-uniform support size
        std::vector<CoefRepr> members;
        members.reserve(static_cast<std::size_t>(prm.samples));
        Rng member_rng = seeder.stream("members");
        for (int i = 0; i < prm.samples; ++i) {
          if (i % 2 == 0) {
            const double u = member_rng.uniform();
            const int support = std::max(
                1, static_cast<int>(std::lround(std::pow(
                       2.0, u * std::log2(static_cast<double>(system->n_atoms()))))));
            members.push_back(flat_support_member(system, q, support, member_rng));
          } else {
            members.push_back(sample_hull(system, q, member_rng.next_u64()));
          }
        }
        std::vector<double> max_err(prm.m_list.size(), 0.0);
        for (std::size_t mi = 0; mi < prm.m_list.size(); ++mi) {
          const int m = prm.m_list[mi];
          double worst = 0.0;
          for (std::size_t i = 0; i < members.size(); ++i) {
            const TwoStageResult r =
                two_stage_mterm(members[i], m, WeaknessSequence::constant(1.0),
                                SelectPolicy::Exact, prm.seed + i);
            worst = std::max(worst, r.error);
          }
          max_err[mi] = worst;
          pooled_max[mi] = std::max(pooled_max[mi], worst);
          curve_csv.row({static_cast<double>(si), q, p, static_cast<double>(m), worst});
        }
        std::vector<std::pair<double, double>> pts;
        for (std::size_t mi = 0; mi < prm.m_list.size(); ++mi)
          pts.emplace_back(static_cast<double>(prm.m_list[mi]), max_err[mi]);
        const RateFit fit = fit_rate(pts, target, prm.slack,
                                     static_cast<double>(prm.m_list.front()),
                                     static_cast<double>(prm.m_list.back()));
        fit_csv.row({0.0, static_cast<double>(si), q, p, fit.slope, target,
                     prm.slack, fit.pass ? 1.0 : 0.0});
      }
      std::vector<std::pair<double, double>> pts;
      for (std::size_t mi = 0; mi < prm.m_list.size(); ++mi)
        pts.emplace_back(static_cast<double>(prm.m_list[mi]), pooled_max[mi]);
      const RateFit fit = fit_rate(pts, target, prm.slack,
                                   static_cast<double>(prm.m_list.front()),
                                   static_cast<double>(prm.m_list.back()));
      fit_csv.row({1.0, 2.0, q, p, fit.slope, target, prm.slack, fit.pass ? 1.0 : 0.0});
      if (!fit.pass) all_ok = false;
      const double dev = std::abs(fit.slope - target);
      if (dev > worst_dev) {
        worst_dev = dev;
        worst_case = "q=" + format_g17(q) + ", p=" + format_g17(p) +
                     ": slope " + format_g17(fit.slope) + " vs target " +
                     format_g17(target);
      }
    }
  }
  out.metrics = {{"worst_slope_deviation", worst_dev}};
  out.pass = all_ok;
  out.detail = "worst pooled fit: " + worst_case;
  out.artifacts.emplace_back("hull_rate_curves.csv", curve_csv.str());
  out.artifacts.emplace_back("hull_rate_fits.csv", fit_csv.str());
  return out;
}

SuiteOutcome run_ball_net(const BallNetParams& prm) {
  SuiteOutcome out;
  Rng root = Rng(prm.seed).stream("ball-net");
  CsvWriter net_csv({"d", "k", "size", "radius", "bound", "stress_max"});
  long net_violations = 0;
  for (int d : prm.d_list) {
    for (int k = 0; k <= prm.k_max; ++k) {
      const EpsNet net = grid_net_ball(d, k);
      const double bound = 3.0 * std::pow(2.0, -static_cast<double>(k) / d);
      Rng rng = root.stream("stress-" + std::to_string(d) + "-" + std::to_string(k));
      double stress_max = 0.0;
      Vec x(d);
      for (int i = 0; i < prm.stress_points; ++i) {
        for (int c = 0; c < d; ++c) x[c] = 2.0 * rng.uniform() - 1.0;
        stress_max = std::max(stress_max, grid_net_distance(net, x));
      }
      const bool ok = net.centers.size() == (1ull << k) && net.radius <= bound &&
                      stress_max <= net.radius;
      if (!ok) ++net_violations;
      net_csv.row({static_cast<double>(d), static_cast<double>(k),
                   static_cast<double>(net.centers.size()), net.radius, bound,
                   stress_max});
    }
  }
  // product composition on the unit ball
  const EpsNet a = grid_net_ball(prm.compose_d, prm.compose_k1);
  const EpsNet b = grid_net_ball(prm.compose_d, prm.compose_k2);
  const EpsNet composed = compose_product_net(a, b);
  const bool size_ok = composed.centers.size() == a.centers.size() * b.centers.size();
  const bool radius_ok = composed.radius == a.radius * b.radius;
  std::vector<Vec> pts;
  pts.reserve(static_cast<std::size_t>(prm.compose_points));
  Rng rng = root.stream("compose-points");
  for (int i = 0; i < prm.compose_points; ++i) {
    Vec x(prm.compose_d);
    for (int c = 0; c < prm.compose_d; ++c) x[c] = 2.0 * rng.uniform() - 1.0;
    pts.push_back(std::move(x));
  }
  const double compose_max = coverage_max_distance(composed, pts);
  const bool compose_ok = size_ok && radius_ok && compose_max <= composed.radius;
  CsvWriter comp_csv({"size", "radius", "coverage_max"});
  comp_csv.row({static_cast<double>(composed.centers.size()), composed.radius,
                compose_max});

  out.metrics = {{"net_violations", static_cast<double>(net_violations)},
                 {"compose_ok", compose_ok ? 1.0 : 0.0},
                 {"compose_max", compose_max}};
  out.pass = net_violations == 0 && compose_ok;
  out.detail = std::to_string(net_violations) + " grid-net violations; composed net " +
               (compose_ok ? "covers" : "FAILS") + " at radius " +
               format_g17(composed.radius);
  out.artifacts.emplace_back("ball_nets.csv", net_csv.str());
  out.artifacts.emplace_back("compose.csv", comp_csv.str());
  out.artifacts.emplace_back("compose_net.json", net_to_json(composed));
  return out;
}

SuiteOutcome run_multiscale(const MultiscaleParams& prm) {
  SuiteOutcome out;
  const int dim = 16;
  const Ambient ambient = Ambient::linf(dim);
  const MultiscaleBudget budget = MultiscaleBudget::make(prm.l, prm.r, prm.l_r);

  const auto block = [&](int from, int width) {
    Mat basis = Mat::Zero(dim, width);
    for (int i = 0; i < width; ++i) basis(from + i, i) = 1.0;
    return basis;
  };
  std::vector<std::vector<SubspaceBallNet>> scales;
  std::uint64_t expected_size = 1;
  if (budget.l_r >= 1) {
    std::vector<SubspaceBallNet> s1;
    for (int bidx = 0; bidx < 4; ++bidx)
      s1.push_back(subspace_grid_net(ambient, block(4 * bidx, 4), budget.n_s[0]));
    expected_size *= 4ull << budget.n_s[0];
    scales.push_back(std::move(s1));
  }
  if (budget.l_r >= 2) {
    std::vector<SubspaceBallNet> s2;
    for (int bidx = 0; bidx < 2; ++bidx)
      s2.push_back(subspace_grid_net(ambient, block(8 * bidx, 8), budget.n_s[1]));
    expected_size *= 2ull << budget.n_s[1];
    scales.push_back(std::move(s2));
  }
  if (budget.l_r > 2)
    throw std::invalid_argument("run_multiscale: toy instance supports l_r <= 2");
  std::vector<Mat> tails;
  for (int s = budget.l_r + 1; s <= budget.l; ++s) tails.push_back(block(0, dim));

  const MultiscaleNet net = multiscale_compose(budget, std::move(scales), prm.r,
                                               std::move(tails), prm.n_verify,
                                               prm.seed);
  CsvWriter csv({"term", "value"});
  for (std::size_t i = 0; i < net.budget_chain.size(); ++i)
    csv.row_mixed({net.budget_chain[i].label, format_g17(net.budget_chain[i].value)});
  csv.row_mixed({"total_radius", format_g17(net.radius)});
  csv.row_mixed({"size", std::to_string(net.size)});
  csv.row_mixed({"max_observed", format_g17(net.certificate.max_observed)});

  const bool size_ok = net.size == expected_size;
  const bool covered = net.certificate.max_observed <= net.radius;
  out.metrics = {{"size_ok", size_ok ? 1.0 : 0.0},
                 {"covered", covered ? 1.0 : 0.0},
                 {"max_observed", net.certificate.max_observed},
                 {"radius", net.radius},
                 {"proof_constraints", budget.proof_constraints_hold() ? 1.0 : 0.0}};
  out.pass = size_ok && covered;
  out.detail = "|A| = " + std::to_string(net.size) + " (" + pass_str(size_ok) +
               "), max member distance " + format_g17(net.certificate.max_observed) +
               " <= budget " + format_g17(net.radius) + " (" + pass_str(covered) + ")";
  out.artifacts.emplace_back("multiscale.csv", csv.str());
  return out;
}

SuiteOutcome run_entropy_curve(const EntropyCurveParams& prm) {
  SuiteOutcome out;
  const LpSpace space(2, 2.0);
  bool ok = true;
  std::string report;
  for (double q : prm.q_list) {
    CsvWriter csv({"k", "eps_upper", "eps_lower"});
    Rng rng = Rng(prm.seed).stream("bq-samples-q" + format_g17(q));
    std::vector<Vec> samples;
    samples.reserve(static_cast<std::size_t>(prm.n_samples));
    while (static_cast<int>(samples.size()) < prm.n_samples) {
      // uniform on the ball B_q^2 by rejection from the bounding square
      Vec x(2);
      x[0] = 2.0 * rng.uniform() - 1.0;
      x[1] = 2.0 * rng.uniform() - 1.0;
      if (lp_norm(x, q) <= 1.0) samples.push_back(std::move(x));
    }
    const auto curve = empirical_entropy_curve(samples, prm.k_max, space);
    for (const auto& pt : curve) {
      csv.row({static_cast<double>(pt.k), pt.eps_upper, pt.eps_lower});
      if (pt.eps_lower > pt.eps_upper + 1e-12) ok = false;
    }
    for (std::size_t i = 1; i < curve.size(); ++i) {
      if (curve[i].eps_upper > curve[i - 1].eps_upper + 1e-12) ok = false;
      if (curve[i].eps_lower > curve[i - 1].eps_lower + 1e-12) ok = false;
    }
    // sanity report only: constants of the entropy bounds are unknown
    double sxx = 0.0, sxy = 0.0, sx = 0.0, sy = 0.0;
    int n = 0;
    for (const auto& pt : curve) {
      if (pt.k < prm.fit_k_lo || pt.k > prm.fit_k_hi || pt.eps_upper <= 1e-13)
        continue;
      const double x = pt.k, y = std::log2(pt.eps_upper);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++n;
    }
    const double slope =
        n >= 2 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : 0.0;
    if (!report.empty()) report += "; ";
    report += "q=" + format_g17(q) + ": d(log2 eps)/dk = " + format_g17(slope) +
              " (2-dim ball reference -1/2)";
    out.artifacts.emplace_back("entropy_curve_q" + format_g17(q) + ".csv", csv.str());
  }
  out.pass = ok;
  out.detail = (ok ? "brackets monotone and ordered; " : "bracket violation; ") + report;
  return out;
}

WeaknessSequence TauSpec::build() const {
  if (kind == "constant") return WeaknessSequence::constant(t);
  if (kind == "decaying") return WeaknessSequence::decaying(exponent);
  if (kind == "explicit") return WeaknessSequence::explicit_list(values);
  throw std::invalid_argument("unknown tau kind: " + kind);
}

namespace {

struct WrgaRateInstance {
  SystemPtr system;
  Vec f;
  std::optional<double> b;
};

WrgaRateInstance build_wrga_rate_instance(const WrgaRateParams& prm) {
  WrgaRateInstance inst;
  if (prm.target == "offset") {
    if (prm.p != 2.0)
      throw std::invalid_argument("offset target requires p = 2");
    const int span = prm.span_dim > 0 ? prm.span_dim : (3 * prm.dim) / 4;
    OffsetInstance oi = make_offset_instance(prm.dim, span, prm.n_atoms,
                                             prm.offset_norm, prm.seed);
    inst.system = std::move(oi.system);
    inst.f = std::move(oi.f);
    inst.b = oi.b;
    return inst;
  }
  if (prm.target != "hull-sample")
    throw std::invalid_argument("unknown target kind: " + prm.target);
  Rng seeder = Rng(prm.seed).stream("wrga-rate");
  if (prm.system == "file") {
    inst.system = system_from_json(read_file(prm.system_path));
    if (inst.system->space().dim() != prm.dim ||
        inst.system->space().lebesgue_p() != prm.p)
      throw std::invalid_argument(
          "wrga-rate: dictionary file does not match the configured space");
  } else {
    const LpSpace space(prm.dim, prm.p);
    inst.system = prm.system == "canonical"
                      ? canonical_system(space)
                      : random_system(space, prm.n_atoms, seeder.next_u64());
  }
  inst.f = synthesize(sample_hull(inst.system, prm.hull_q, seeder.next_u64()));
  inst.b = prm.hull_q <= 1.0 ? std::optional<double>(0.0) : std::nullopt;
  return inst;
}

}  // namespace

GreedyTrace wrga_rate_trace(const WrgaRateParams& prm) {
  const WrgaRateInstance inst = build_wrga_rate_instance(prm);
  WrgaOptions opts;
  opts.policy = select_policy_from_string(prm.policy);
  opts.b = inst.b;
  opts.seed = prm.seed;
  return wrga_run(inst.system, inst.f, prm.tau.build(), prm.m_max, opts);
}

SuiteOutcome run_wrga_rate(const WrgaRateParams& prm) {
  SuiteOutcome out;
  const LpSpace space(prm.dim, prm.p);
  const WrgaRateInstance inst = build_wrga_rate_instance(prm);
  WrgaOptions opts;
  opts.policy = select_policy_from_string(prm.policy);
  opts.b = inst.b;
  opts.seed = prm.seed;
  const GreedyTrace tr = wrga_run(inst.system, inst.f, prm.tau.build(), prm.m_max, opts);
  CsvWriter csv({"step", "residual_norm", "a_m", "lambda", "atom_index"});
  std::vector<std::pair<double, double>> curve;
  double hilbert_max = 0.0;
  for (const auto& r : tr.records) {
    csv.row({static_cast<double>(r.step), r.residual_norm, r.a_m, r.lambda,
             static_cast<double>(r.atom_index)});
    const double a = std::isnan(r.a_m) ? r.residual_norm : r.a_m;
    curve.emplace_back(static_cast<double>(r.step), a);
    hilbert_max = std::max(hilbert_max, r.step * r.residual_norm * r.residual_norm);
  }
  const double target = prm.fit_target ? *prm.fit_target : -1.0 / space.conj_p();
  const double m_hi = prm.fit_m_hi > 0.0 ? prm.fit_m_hi : prm.m_max;
  bool fit_ok = true;
  double slope = -1e300;
  try {
    const RateFit fit = fit_rate(curve, target, prm.fit_slack, prm.fit_m_lo, m_hi);
    slope = fit.slope;
    fit_ok = fit.slope <= target + prm.fit_slack;
  } catch (const std::invalid_argument&) {
    fit_ok = true;  // residual floored inside the window
  }
  out.metrics = {{"slope", slope},
                 {"target", target},
                 {"hilbert_max", hilbert_max},
                 {"final_residual",
                  tr.records.empty() ? 0.0 : tr.records.back().residual_norm}};
  out.pass = fit_ok;
  out.detail = "slope " + format_g17(slope) + " vs target " + format_g17(target) +
               " + " + format_g17(prm.fit_slack);
  out.artifacts.emplace_back("wrga_curve.csv", csv.str());
  out.artifacts.emplace_back("wrga_trace.jsonl", trace_to_jsonl(tr));
  out.artifacts.emplace_back("system.json", system_to_json(*inst.system));
  return out;
}

// ---- JSON config ----------------------------------------------------------

namespace {

using nlohmann::json;

[[noreturn]] void config_fail(const std::string& path, const std::string& what) {
  throw std::invalid_argument("config error at " + path + ": " + what);
}

void check_keys(const json& j, const std::string& path,
                const std::set<std::string>& allowed) {
  if (!j.is_object()) config_fail(path, "expected an object");
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) config_fail(path + "." + key, "unknown field");
}

double get_num(const json& j, const std::string& path, const std::string& key,
               double fallback, bool required = false) {
  if (!j.contains(key)) {
    if (required) config_fail(path + "." + key, "missing required field");
    return fallback;
  }
  if (!j[key].is_number()) config_fail(path + "." + key, "expected a number");
  return j[key].get<double>();
}

int get_int(const json& j, const std::string& path, const std::string& key,
            int fallback, bool required = false) {
  if (!j.contains(key)) {
    if (required) config_fail(path + "." + key, "missing required field");
    return fallback;
  }
  if (!j[key].is_number_integer()) config_fail(path + "." + key, "expected an integer");
  return j[key].get<int>();
}

std::string get_str(const json& j, const std::string& path, const std::string& key,
                    const std::string& fallback, bool required = false) {
  if (!j.contains(key)) {
    if (required) config_fail(path + "." + key, "missing required field");
    return fallback;
  }
  if (!j[key].is_string()) config_fail(path + "." + key, "expected a string");
  return j[key].get<std::string>();
}

std::vector<double> get_num_list(const json& j, const std::string& path,
                                 const std::string& key,
                                 std::vector<double> fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_array()) config_fail(path + "." + key, "expected an array");
  std::vector<double> out;
  for (const auto& v : j[key]) {
    if (!v.is_number()) config_fail(path + "." + key, "expected numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<int> get_int_list(const json& j, const std::string& path,
                              const std::string& key, std::vector<int> fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_array()) config_fail(path + "." + key, "expected an array");
  std::vector<int> out;
  for (const auto& v : j[key]) {
    if (!v.is_number_integer()) config_fail(path + "." + key, "expected integers");
    out.push_back(v.get<int>());
  }
  return out;
}

TauSpec parse_tau(const json& j, const std::string& path) {
  TauSpec tau;
  if (!j.is_object()) config_fail(path, "expected an object");
  check_keys(j, path, {"kind", "t", "exponent", "values"});
  tau.kind = get_str(j, path, "kind", "constant");
  tau.t = get_num(j, path, "t", 1.0);
  tau.exponent = get_num(j, path, "exponent", 0.0);
  tau.values = get_num_list(j, path, "values", {});
  tau.build();  // validate eagerly
  return tau;
}

}  // namespace

ParsedConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config error: invalid JSON: ") + e.what());
  }
  ParsedConfig cfg;
  if (!j.is_object()) config_fail("$", "expected an object");
  cfg.kind = get_str(j, "$", "kind", "", true);
  cfg.seed = static_cast<std::uint64_t>(get_num(j, "$", "seed", 1.0));
  cfg.out_dir = get_str(j, "$", "out_dir", "out");

  const std::set<std::string> common = {"kind", "seed", "out_dir"};
  if (cfg.kind == "wrga-rate") {
    std::set<std::string> keys = common;
    keys.insert({"space", "system", "target", "tau", "policy", "m_max", "fit"});
    check_keys(j, "$", keys);
    WrgaRateParams& p = cfg.wrga_rate;
    if (j.contains("space")) {
      check_keys(j["space"], "space", {"dim", "p"});
      p.dim = get_int(j["space"], "space", "dim", p.dim, true);
      p.p = get_num(j["space"], "space", "p", p.p, true);
    }
    if (j.contains("system")) {
      check_keys(j["system"], "system", {"kind", "n_atoms", "path"});
      p.system = get_str(j["system"], "system", "kind", p.system);
      p.n_atoms = get_int(j["system"], "system", "n_atoms", p.n_atoms);
      p.system_path = get_str(j["system"], "system", "path", p.system_path);
      if (p.system == "file" && p.system_path.empty())
        config_fail("system.path", "required for kind 'file'");
    }
    if (j.contains("target")) {
      check_keys(j["target"], "target",
                 {"kind", "hull_q", "offset_norm", "span_dim"});
      p.target = get_str(j["target"], "target", "kind", p.target);
      p.hull_q = get_num(j["target"], "target", "hull_q", p.hull_q);
      p.offset_norm = get_num(j["target"], "target", "offset_norm", p.offset_norm);
      p.span_dim = get_int(j["target"], "target", "span_dim", p.span_dim);
    }
    if (j.contains("tau")) p.tau = parse_tau(j["tau"], "tau");
    p.policy = get_str(j, "$", "policy", p.policy);
    select_policy_from_string(p.policy);
    p.m_max = get_int(j, "$", "m_max", p.m_max);
    if (j.contains("fit")) {
      check_keys(j["fit"], "fit", {"m_lo", "m_hi", "target", "slack"});
      p.fit_m_lo = get_num(j["fit"], "fit", "m_lo", p.fit_m_lo);
      p.fit_m_hi = get_num(j["fit"], "fit", "m_hi", p.fit_m_hi);
      if (j["fit"].contains("target"))
        p.fit_target = get_num(j["fit"], "fit", "target", 0.0);
      p.fit_slack = get_num(j["fit"], "fit", "slack", p.fit_slack);
    }
    p.seed = cfg.seed;
  } else if (cfg.kind == "recursion-suite") {
    std::set<std::string> keys = common;
    keys.insert({"runs", "dim", "n_atoms", "p_list", "tau_list", "m_max", "tol"});
    check_keys(j, "$", keys);
    RecursionSuiteParams& p = cfg.recursion;
    p.runs = get_int(j, "$", "runs", p.runs);
    p.dim = get_int(j, "$", "dim", p.dim);
    p.n_atoms = get_int(j, "$", "n_atoms", p.n_atoms);
    p.p_list = get_num_list(j, "$", "p_list", p.p_list);
    p.tau_list = get_num_list(j, "$", "tau_list", p.tau_list);
    p.m_max = get_int(j, "$", "m_max", p.m_max);
    p.tol = get_num(j, "$", "tol", p.tol);
    p.seed = cfg.seed;
  } else if (cfg.kind == "sigma-bound") {
    std::set<std::string> keys = common;
    keys.insert({"agreement_seeds", "max_dim", "max_m", "tail_samples", "tail_dim"});
    check_keys(j, "$", keys);
    SigmaSuiteParams& p = cfg.sigma;
    p.agreement_seeds = get_int(j, "$", "agreement_seeds", p.agreement_seeds);
    p.max_dim = get_int(j, "$", "max_dim", p.max_dim);
    p.max_m = get_int(j, "$", "max_m", p.max_m);
    p.tail_samples = get_int(j, "$", "tail_samples", p.tail_samples);
    p.tail_dim = get_int(j, "$", "tail_dim", p.tail_dim);
    p.seed = cfg.seed;
  } else if (cfg.kind == "hull-rate") {
    std::set<std::string> keys = common;
    keys.insert({"dim", "n_atoms", "q_list", "p_list", "m_list", "samples", "slack"});
    check_keys(j, "$", keys);
    HullRateParams& p = cfg.hull_rate;
    p.dim = get_int(j, "$", "dim", p.dim);
    p.n_atoms = get_int(j, "$", "n_atoms", p.n_atoms);
    p.q_list = get_num_list(j, "$", "q_list", p.q_list);
    p.p_list = get_num_list(j, "$", "p_list", p.p_list);
    p.m_list = get_int_list(j, "$", "m_list", p.m_list);
    p.samples = get_int(j, "$", "samples", p.samples);
    p.slack = get_num(j, "$", "slack", p.slack);
    p.seed = cfg.seed;
  } else if (cfg.kind == "entropy-curve") {
    std::set<std::string> keys = common;
    keys.insert({"q_list", "n_samples", "k_max"});
    check_keys(j, "$", keys);
    EntropyCurveParams& p = cfg.entropy_curve;
    p.q_list = get_num_list(j, "$", "q_list", p.q_list);
    p.n_samples = get_int(j, "$", "n_samples", p.n_samples);
    p.k_max = get_int(j, "$", "k_max", p.k_max);
    p.seed = cfg.seed;
  } else if (cfg.kind == "ball-net") {
    std::set<std::string> keys = common;
    keys.insert({"d_list", "k_max", "stress_points"});
    check_keys(j, "$", keys);
    BallNetParams& p = cfg.ball_net;
    p.d_list = get_int_list(j, "$", "d_list", p.d_list);
    p.k_max = get_int(j, "$", "k_max", p.k_max);
    p.stress_points = get_int(j, "$", "stress_points", p.stress_points);
    p.seed = cfg.seed;
  } else if (cfg.kind == "multiscale") {
    std::set<std::string> keys = common;
    keys.insert({"l", "r", "l_r", "n_verify"});
    check_keys(j, "$", keys);
    MultiscaleParams& p = cfg.multiscale;
    p.l = get_int(j, "$", "l", p.l);
    p.r = get_num(j, "$", "r", p.r);
    p.l_r = get_int(j, "$", "l_r", p.l_r);
    p.n_verify = get_int(j, "$", "n_verify", p.n_verify);
    p.seed = cfg.seed;
  } else if (cfg.kind == "verify-all") {
    check_keys(j, "$", common);
  } else {
    config_fail("$.kind", "unknown experiment kind '" + cfg.kind + "'");
  }
  return cfg;
}

SuiteOutcome run_config(const ParsedConfig& cfg) {
  SuiteOutcome out;
  if (cfg.kind == "wrga-rate") {
    out = run_wrga_rate(cfg.wrga_rate);
  } else if (cfg.kind == "recursion-suite") {
    out = run_recursion_suite(cfg.recursion);
  } else if (cfg.kind == "sigma-bound") {
    out = run_sigma_suite(cfg.sigma);
  } else if (cfg.kind == "hull-rate") {
    out = run_hull_rate(cfg.hull_rate);
  } else if (cfg.kind == "entropy-curve") {
    out = run_entropy_curve(cfg.entropy_curve);
  } else if (cfg.kind == "ball-net") {
    out = run_ball_net(cfg.ball_net);
  } else if (cfg.kind == "multiscale") {
    out = run_multiscale(cfg.multiscale);
  } else {
    throw std::invalid_argument("run_config: cannot dispatch kind " + cfg.kind);
  }
  write_artifacts(cfg.out_dir, out);
  return out;
}

void write_artifacts(const std::string& out_dir, const SuiteOutcome& outcome) {
  for (const auto& [name, content] : outcome.artifacts)
    write_file_atomic(out_dir + "/" + name, content);
}

}  // namespace lpgreedy
