#include "lpgreedy/wrga.hpp"

#include "lpgreedy/io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace lpgreedy {

WeaknessSequence WeaknessSequence::constant(double t) {
  if (!(t >= 0.0 && t <= 1.0))
    throw std::invalid_argument("WeaknessSequence: t must lie in [0, 1]");
  WeaknessSequence w;
  w.mode_ = Mode::Constant;
  w.scalar_ = t;
  return w;
}

WeaknessSequence WeaknessSequence::explicit_list(std::vector<double> values) {
  if (values.empty())
    throw std::invalid_argument("WeaknessSequence: empty explicit list");
  for (double t : values)
    if (!(t >= 0.0 && t <= 1.0))
      throw std::invalid_argument("WeaknessSequence: t_k must lie in [0, 1]");
  WeaknessSequence w;
  w.mode_ = Mode::Explicit;
  w.values_ = std::move(values);
  return w;
}

WeaknessSequence WeaknessSequence::decaying(double exponent) {
  if (!(exponent >= 0.0))
    throw std::invalid_argument("WeaknessSequence: exponent must be >= 0");
  WeaknessSequence w;
  w.mode_ = Mode::Decaying;
  w.scalar_ = exponent;
  return w;
}

double WeaknessSequence::at(int k) const {
  if (k < 1) throw std::invalid_argument("WeaknessSequence::at: k must be >= 1");
  switch (mode_) {
    case Mode::Constant:
      return scalar_;
    case Mode::Explicit:
      return values_[std::min<std::size_t>(static_cast<std::size_t>(k - 1),
                                           values_.size() - 1)];
    case Mode::Decaying:
      return std::pow(static_cast<double>(k), -scalar_);
  }
  return scalar_;
}

SelectPolicy select_policy_from_string(const std::string& name) {
  if (name == "exact") return SelectPolicy::Exact;
  if (name == "lazy-weak") return SelectPolicy::LazyWeak;
  if (name == "random-weak") return SelectPolicy::RandomWeak;
  throw std::invalid_argument("unknown selection policy: " + name);
}

Selection select_weak(const SymmetricSystem& system, const Vec& functional,
                      const Vec& g_prev, double t_m, SelectPolicy policy,
                      Rng* rng) {
  if (functional.size() != system.space().dim() ||
      g_prev.size() != system.space().dim())
    throw std::invalid_argument("select_weak: dimension mismatch");
  if (!(t_m >= 0.0 && t_m <= 1.0))
    throw std::invalid_argument("select_weak: t_m must lie in [0, 1]");
  const Mat& A = system.atoms();
  const int n = system.n_atoms();
  const Vec corr = A.transpose() * functional;
  const double base = functional.dot(g_prev);

  Eigen::Index jbest = 0;
  const double cbest = corr.cwiseAbs().maxCoeff(&jbest);
  const double sup_value = cbest - base;
  const auto value_of = [&](int j, int s) { return s * corr[j] - base; };
  const auto best_sign = [&](int j) { return corr[j] >= 0.0 ? 1 : -1; };

  int j = static_cast<int>(jbest);
  int s = best_sign(j);
  switch (policy) {
    case SelectPolicy::Exact:
      break;
    case SelectPolicy::LazyWeak: {
      const double threshold = t_m * sup_value - 1e-15;
      for (int cand = 0; cand < n; ++cand) {
        if (value_of(cand, best_sign(cand)) >= threshold) {
          j = cand;
          s = best_sign(cand);
          break;
        }
      }
      break;
    }
    case SelectPolicy::RandomWeak: {
      if (!rng)
        throw std::invalid_argument("select_weak: random-weak requires an rng");
      const double threshold = t_m * sup_value - 1e-15;
      std::vector<std::pair<int, int>> qualifiers;
      for (int cand = 0; cand < n; ++cand)
        for (int sign : {1, -1})
          if (value_of(cand, sign) >= threshold) qualifiers.emplace_back(cand, sign);
      const auto pick =
          qualifiers[static_cast<std::size_t>(rng->uniform_int(0, static_cast<int>(qualifiers.size()) - 1))];
      j = pick.first;
      s = pick.second;
      break;
    }
  }
  return Selection{j, s, value_of(j, s), sup_value};
}

RecursionConstants recursion_constants(const LpSpace& space) {
  const double q = space.smooth_q();
  const double g = space.gamma();
  const double ps = space.conj_p();
  const double c3 = 0.5 * std::pow(std::pow(2.0, q + 2.0) * g, -1.0 / (q - 1.0));
  const double c4 = std::pow(2.0, -ps - 1.0);
  return RecursionConstants{c3, c4, std::min(c3, c4), ps};
}

GreedyTrace wrga_run(SystemPtr system, const Vec& f,
                     const WeaknessSequence& tau, int m_max,
                     const WrgaOptions& opts) {
  if (!system) throw std::invalid_argument("wrga_run: null system");
  const LpSpace& sp = system->space();
  if (f.size() != sp.dim())
    throw std::invalid_argument("wrga_run: dimension mismatch");
  if (m_max < 0) throw std::invalid_argument("wrga_run: m_max must be >= 0");
  if (opts.b && !(*opts.b >= 0.0))
    throw std::invalid_argument("wrga_run: b must be >= 0");

  const int n = system->n_atoms();
  GreedyTrace tr;
  tr.f0_norm = sp.norm(f);
  tr.b_used = opts.b ? *opts.b : std::numeric_limits<double>::quiet_NaN();
  tr.weights = Vec::Zero(n);
  tr.approximant = Vec::Zero(sp.dim());
  tr.records.reserve(static_cast<std::size_t>(m_max));

  Vec g = Vec::Zero(sp.dim());
  Vec resid = f;
  double rnorm = tr.f0_norm;
  Rng rng = Rng(opts.seed).stream("wrga-select");
  const RecursionConstants rc = recursion_constants(sp);

  for (int m = 1; m <= m_max; ++m) {
    if (rnorm <= opts.stop_residual) break;  // truncated trace, not an error
    const Vec functional = norming_functional(sp, resid);
    const double t_m = tau.at(m);
    const Selection sel =
        select_weak(*system, functional, g, t_m, opts.policy, &rng);
    const Vec phi_atom =
        static_cast<double>(sel.sign) * system->atoms().col(sel.index);
    const SegmentMin sm = segment_min(sp, f, g, phi_atom, 1e-12);

    g = (1.0 - sm.lambda) * g + sm.lambda * phi_atom;
    tr.weights *= (1.0 - sm.lambda);
    tr.weights[sel.index] += sm.lambda * sel.sign;
    resid = f - g;
    const double prev_norm = rnorm;
    rnorm = sp.norm(resid);

    StepRecord rec;
    rec.step = m;
    rec.atom_index = sel.index;
    rec.atom_sign = sel.sign;
    rec.lambda = sm.lambda;
    rec.residual_norm = rnorm;
    rec.weak_value = sel.weak_value;
    rec.sup_value = sel.sup_value;
    if (opts.b) {
      const double b = *opts.b;
      rec.a_m = rnorm - b;
      const double a_prev = prev_norm - b;
      rec.recursion_rhs =
          a_prev * (1.0 - rc.c5 * std::pow(t_m, rc.p_star) *
                              std::pow(std::max(a_prev, 0.0), rc.p_star));
    }
    tr.records.push_back(rec);
  }
  tr.approximant = g;
  return tr;
}

RecursionReport recursion_check(const GreedyTrace& trace, const LpSpace& space,
                                const WeaknessSequence& tau, double tol) {
  if (std::isnan(trace.b_used))
    throw std::invalid_argument(
        "recursion_check: recursion check requires hull distance");
  if (!(tol > 0.0))
    throw std::invalid_argument("recursion_check: tol must be > 0");
  const double b = trace.b_used;
  const double q = space.smooth_q();
  const double g = space.gamma();
  const RecursionConstants rc = recursion_constants(space);

  RecursionReport rep;
  rep.constants = rc;
  double a_prev = trace.f0_norm - b;
  for (const StepRecord& r : trace.records) {
    const double a_m = r.residual_norm - b;
    RecursionStepReport s;
    s.step = r.step;
    s.a_prev = a_prev;
    s.a_m = a_m;
    if (a_prev > 10.0 * tol) {
      s.checked = true;
      const double t = tau.at(r.step);
      double factor_min = std::numeric_limits<double>::infinity();
      for (int i = 0; i <= 1000; ++i) {
        const double lam = static_cast<double>(i) / 1000.0;
        const double factor =
            1.0 - lam * t + 2.0 * g * std::pow(2.0 * lam / a_prev, q);
        factor_min = std::min(factor_min, factor);
      }
      s.grid_rhs = a_prev * factor_min;
      s.lambda1 = std::pow(
          t * std::pow(a_prev, q) / (std::pow(2.0, q + 2.0) * g), 1.0 / (q - 1.0));
      const double tp = std::pow(t, rc.p_star);
      const double ap = std::pow(a_prev, rc.p_star);
      const double case_factor =
          s.lambda1 <= 1.0 ? 1.0 - rc.c3 * tp * ap : 1.0 - 0.5 * t;
      s.case_rhs = a_prev * case_factor;
      s.c5_rhs = a_prev * (1.0 - rc.c5 * tp * ap);
      s.slack_grid = s.grid_rhs - a_m;
      s.slack_case = s.case_rhs - a_m;
      s.pass = a_m <= s.grid_rhs + tol && a_m <= s.case_rhs + tol &&
               a_m <= s.c5_rhs + tol;
      ++rep.n_checked;
      if (!s.pass) ++rep.n_failed;
    }
    rep.steps.push_back(s);
    a_prev = a_m;
  }
  rep.pass = rep.n_failed == 0;
  return rep;
}

TwoStageResult two_stage_mterm(const CoefRepr& repr, int m,
                               const WeaknessSequence& tau, SelectPolicy policy,
                               std::uint64_t seed) {
  if (!repr.system) throw std::invalid_argument("two_stage_mterm: null system");
  if (m < 1) throw std::invalid_argument("two_stage_mterm: m must be >= 1");
  if (!(repr.hull_q > 0.0 && repr.hull_q <= 1.0))
    throw std::invalid_argument("two_stage_mterm: hull_q must lie in (0, 1]");
  if (repr.hull_mass() > 1.0 + 1e-9)
    throw std::invalid_argument("two_stage_mterm: hull constraint violated");
  const SystemPtr system = repr.system;
  const LpSpace& sp = system->space();
  const int n = system->n_atoms();

  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return std::abs(repr.coefs[a]) > std::abs(repr.coefs[b]);
  });

  Vec head = Vec::Zero(n);
  for (int t = 0; t < std::min(m, n); ++t)
    head[idx[static_cast<std::size_t>(t)]] = repr.coefs[idx[static_cast<std::size_t>(t)]];
  const Vec tail_coefs = repr.coefs - head;
  const double s1 = tail_coefs.cwiseAbs().sum();
  const Vec target_full = synthesize(repr);

  TwoStageResult out;
  out.tail_mass = s1;
  if (s1 <= 1e-15) {
    out.coefs = head;
    out.greedy_residual = 0.0;
  } else {
    const Vec tail_target = (system->atoms() * tail_coefs) / s1;  // in A_1(D)
    WrgaOptions opts;
    opts.policy = policy;
    opts.seed = seed;
    const GreedyTrace trc = wrga_run(system, tail_target, tau, m, opts);
    out.greedy_residual = trc.records.empty() ? sp.norm(tail_target)
                                              : trc.records.back().residual_norm;
    out.coefs = head + s1 * trc.weights;
  }
  out.error = sp.norm(target_full - system->atoms() * out.coefs);
  out.terms_used =
      static_cast<int>((out.coefs.cwiseAbs().array() > 0.0).count());
  return out;
}

std::string trace_to_jsonl(const GreedyTrace& trace) {
  std::string s;
  for (const StepRecord& r : trace.records) {
    s += "{\"step\": " + std::to_string(r.step) +
         ", \"atom_index\": " + std::to_string(r.atom_index) +
         ", \"atom_sign\": " + std::to_string(r.atom_sign) +
         ", \"lambda\": " + format_g17(r.lambda) +
         ", \"residual_norm\": " + format_g17(r.residual_norm) +
         ", \"weak_value\": " + format_g17(r.weak_value) +
         ", \"sup_value\": " + format_g17(r.sup_value);
    if (!std::isnan(r.a_m)) {
      s += ", \"a_m\": " + format_g17(r.a_m) +
           ", \"recursion_rhs\": " + format_g17(r.recursion_rhs);
    }
    s += "}\n";
  }
  return s;
}

}  // namespace lpgreedy
