#ifndef LPGREEDY_WRGA_HPP
#define LPGREEDY_WRGA_HPP

#include "lpgreedy/rng.hpp"
#include "lpgreedy/systems.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace lpgreedy {

// Per-step selection slack t_k in [0,1]; t_k = 1 is exact greedy.
class WeaknessSequence {
 public:
  static WeaknessSequence constant(double t);
  static WeaknessSequence explicit_list(std::vector<double> values);
  // t_k = k^{-exponent}
  static WeaknessSequence decaying(double exponent);

  double at(int k) const;  // k >= 1; an explicit list repeats its last value

 private:
  WeaknessSequence() = default;
  enum class Mode { Constant, Explicit, Decaying } mode_ = Mode::Constant;
  double scalar_ = 1.0;
  std::vector<double> values_;
};

enum class SelectPolicy { Exact, LazyWeak, RandomWeak };

SelectPolicy select_policy_from_string(const std::string& name);

struct Selection {
  int index = 0;
  int sign = 1;
  double weak_value = 0.0;  // F_{f_{m-1}}(phi_m - G_{m-1}) for the pick
  double sup_value = 0.0;   // sup over ±atoms of the same quantity
};

// Step (1): sup_value = max_j |<F, g_j>| - <F, G_prev>; the returned signed
// atom satisfies the weak inequality for t_m. Exact breaks ties to the
// smallest index, then the positive sign; LazyWeak returns the smallest index
// meeting the threshold; RandomWeak picks uniformly among qualifiers.
Selection select_weak(const SymmetricSystem& system, const Vec& functional,
                      const Vec& g_prev, double t_m, SelectPolicy policy,
                      Rng* rng = nullptr);

struct StepRecord {
  int step = 0;  // m, 1-based
  int atom_index = 0;
  int atom_sign = 1;
  double lambda = 0.0;
  double residual_norm = 0.0;  // ||f_m||
  double weak_value = 0.0;
  double sup_value = 0.0;
  // filled only when a hull distance b was supplied
  double a_m = std::numeric_limits<double>::quiet_NaN();
  double recursion_rhs = std::numeric_limits<double>::quiet_NaN();
};

struct GreedyTrace {
  std::vector<StepRecord> records;
  Vec weights;      // signed convex-combination weights of G_m over atoms
  double b_used = std::numeric_limits<double>::quiet_NaN();
  double f0_norm = 0.0;
  Vec approximant;  // G_m, equal to atoms * weights
};

struct WrgaOptions {
  SelectPolicy policy = SelectPolicy::Exact;
  std::optional<double> b;  // hull distance, when known
  std::uint64_t seed = 0;   // used by RandomWeak only
  double stop_residual = 1e-13;
};

// Steps (1)-(3) for m_max iterations, stopping early once the residual norm
// drops to stop_residual. Weights update multiplicatively: existing weights
// scale by (1 - lambda_m), the selected signed atom gains lambda_m.
GreedyTrace wrga_run(SystemPtr system, const Vec& f,
                     const WeaknessSequence& tau, int m_max,
                     const WrgaOptions& opts = {});

// Constants derived from the convergence proof:
//   c3 = (1/2) (2^{q+2} gamma)^{-1/(q-1)},  c4 = 2^{-p*-1},  c5 = min(c3, c4)
// with p* = q/(q-1) the recursion exponent.
struct RecursionConstants {
  double c3, c4, c5, p_star;
};
RecursionConstants recursion_constants(const LpSpace& space);

struct RecursionStepReport {
  int step = 0;
  bool checked = false;
  double a_prev = 0.0;
  double a_m = 0.0;
  double lambda1 = 0.0;   // case-split threshold
  double grid_rhs = 0.0;  // infimum form, evaluated on a 1000-point grid
  double case_rhs = 0.0;  // per-case sharpened bound
  double c5_rhs = 0.0;    // a_{m-1}(1 - c5 t^{p*} a_{m-1}^{p*})
  double slack_grid = 0.0;
  double slack_case = 0.0;
  bool pass = true;
};

struct RecursionReport {
  std::vector<RecursionStepReport> steps;
  int n_checked = 0;
  int n_failed = 0;
  bool pass = true;
  RecursionConstants constants{};
};

// Verifies, for every step with a_{m-1} > 10 tol, the per-step contraction
// inequality in both its infimum form (grid-evaluated) and its closed form
// with the derived constants. Requires a trace produced with a supplied b.
RecursionReport recursion_check(const GreedyTrace& trace, const LpSpace& space,
                                const WeaknessSequence& tau, double tol);

struct TwoStageResult {
  Vec coefs;                    // combined approximant over atoms
  double error = 0.0;           // ||synthesize(repr) - approximant||_p
  double tail_mass = 0.0;       // s1 = l1 mass of the dropped coefficients
  double greedy_residual = 0.0; // ||T/s1 - G_m|| from the tail run
  int terms_used = 0;           // nonzero coefficients, <= 2m
};

// Keeps the m largest-|c_j| terms exactly, then runs the greedy algorithm for
// m steps on the l1-normalized tail; the result is an <= 2m-term approximant.
TwoStageResult two_stage_mterm(const CoefRepr& repr, int m,
                               const WeaknessSequence& tau, SelectPolicy policy,
                               std::uint64_t seed);

// JSON lines, one StepRecord per line.
std::string trace_to_jsonl(const GreedyTrace& trace);

}  // namespace lpgreedy

#endif
