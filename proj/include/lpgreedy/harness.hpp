#ifndef LPGREEDY_HARNESS_HPP
#define LPGREEDY_HARNESS_HPP

#include "lpgreedy/entropy.hpp"
#include "lpgreedy/ratefit.hpp"
#include "lpgreedy/sparse_oracle.hpp"
#include "lpgreedy/wrga.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lpgreedy {

// Uniform result of one experiment suite: a pass flag, a one-line summary,
// deterministic artifacts (filename -> content), and named metrics so
// composite criteria can read individual numbers.
struct SuiteOutcome {
  bool pass = true;
  std::string detail;
  std::vector<std::pair<std::string, std::string>> artifacts;
  std::vector<std::pair<std::string, double>> metrics;

  double metric(const std::string& name, double fallback = 0.0) const;
};

struct DualityParams {
  int pairs = 1000;
  std::vector<int> dims = {2, 10, 100};
  std::vector<double> p_list = {1.5, 2.0, 3.0, 4.0};
  double tol = 1e-9;
  std::uint64_t seed = 1;
};
SuiteOutcome run_duality_suite(const DualityParams& prm);

// The 2-D Hilbert walkthrough: D = {e1, e2}, f = (1/2, 1/2), tau = 1.
SuiteOutcome run_worked_example(double tol = 1e-9);

struct RecursionSuiteParams {
  int runs = 50;
  int dim = 40;
  int n_atoms = 80;
  std::vector<double> p_list = {1.5, 2.0, 3.0};
  std::vector<double> tau_list = {1.0, 0.5};
  int m_max = 60;
  double tol = 1e-8;
  double fit_m_lo = 8.0, fit_m_hi = 60.0;
  double fit_slack = 0.15;
  std::uint64_t seed = 1;
};
// f in A_1(D) so b = 0; checks the per-step contraction inequalities and the
// one-sided decay-rate fits. Metrics: violations, checked, rate_failures,
// worst_slope_margin (max over runs of slope - (target + slack)).
SuiteOutcome run_recursion_suite(const RecursionSuiteParams& prm);

struct HilbertSuiteParams {
  int runs = 16;
  int dim = 40;
  int n_atoms = 80;
  int m_max = 128;
  double bound = 8.0;
  std::uint64_t seed = 1;
};
// Metric: max_m_r2 = max over runs and steps of m ||f_m||^2.
SuiteOutcome run_hilbert_suite(const HilbertSuiteParams& prm);

struct OffsetParams {
  int dim = 40;
  int span_dim = 30;
  int n_atoms = 80;
  double offset_norm = 0.3;
  int m_max = 128;
  double final_tol = 0.05;
  double recursion_tol = 1e-8;
  std::uint64_t seed = 1;
};
// f = phi* + v with v orthogonal to the span of the atoms, so b = ||v||
// exactly. Metrics: final_gap, violations.
SuiteOutcome run_offset_suite(const OffsetParams& prm);

struct OffsetInstance {
  SystemPtr system;
  Vec f;
  double b = 0.0;
};
OffsetInstance make_offset_instance(int dim, int span_dim, int n_atoms,
                                    double offset_norm, std::uint64_t seed);

struct SigmaSuiteParams {
  int agreement_seeds = 100;
  int max_dim = 10;
  int max_m = 3;
  double agreement_tol = 1e-10;
  int tail_samples = 1000;
  int tail_dim = 64;
  std::vector<std::pair<double, double>> tail_pairs = {{1.0, 2.0}, {0.5, 2.0}, {1.0, 3.0}};  // (q, p)
  std::uint64_t seed = 1;
};
// Metrics: max_disagreement, tail_failures.
SuiteOutcome run_sigma_suite(const SigmaSuiteParams& prm);

struct HullRateParams {
  int dim = 256;
  int n_atoms = 512;  // random systems; the canonical one always has dim atoms
  std::vector<std::string> systems = {"canonical", "random"};
  std::vector<double> q_list = {0.5, 1.0};
  std::vector<double> p_list = {2.0, 3.0};
  std::vector<int> m_list = {4, 8, 16, 32, 64};
  int samples = 200;
  double slack = 0.15;
  std::uint64_t seed = 1;
};
// Two-stage m-term study. Samples mix generic hull draws with flat-support
// members (the extremizers of the class rate); the fitted slope of the
// max-error curve is compared against -(1/q - max(1/2, 1/p)) per (q, p),
// pooled over the two systems; per-system fits are reported alongside.
SuiteOutcome run_hull_rate(const HullRateParams& prm);

struct BallNetParams {
  std::vector<int> d_list = {1, 2, 3, 4};
  int k_max = 16;
  int stress_points = 100000;
  int compose_d = 2;
  int compose_k1 = 6;
  int compose_k2 = 6;
  int compose_points = 10000;
  std::uint64_t seed = 1;
};
// Metrics: net_violations (criterion on sizes/radii/stress), compose_ok.
SuiteOutcome run_ball_net(const BallNetParams& prm);

struct MultiscaleParams {
  int l = 3;
  double r = 1.0;
  int l_r = 2;
  int n_verify = 200;
  std::uint64_t seed = 1;
};
// Toy instance on coordinate blocks in l_inf^16: 4 subspaces of dim 4 at
// scale 1, 2 subspaces of dim 8 at scale 2, a dim-16 tail scale.
SuiteOutcome run_multiscale(const MultiscaleParams& prm);

struct EntropyCurveParams {
  std::vector<double> q_list = {0.5, 1.0};
  int n_samples = 1500;
  int k_max = 8;
  int fit_k_lo = 2, fit_k_hi = 8;
  std::uint64_t seed = 1;
};
SuiteOutcome run_entropy_curve(const EntropyCurveParams& prm);

struct TauSpec {
  std::string kind = "constant";  // constant | decaying | explicit
  double t = 1.0;
  double exponent = 0.0;
  std::vector<double> values;

  WeaknessSequence build() const;
};

struct WrgaRateParams {
  int dim = 100;
  double p = 2.0;
  std::string system = "random";  // canonical | random | file
  std::string system_path;        // dictionary JSON, for kind "file"
  int n_atoms = 200;
  std::string target = "hull-sample";  // hull-sample | offset
  double hull_q = 1.0;
  double offset_norm = 0.3;
  int span_dim = 0;  // offset target; 0 means 3/4 of dim
  TauSpec tau;
  std::string policy = "exact";
  int m_max = 128;
  double fit_m_lo = 8.0;
  double fit_m_hi = 0.0;  // 0 means m_max
  std::optional<double> fit_target;  // default -1/p*
  double fit_slack = 0.15;
  std::uint64_t seed = 1;
};
// Single greedy run with a rate fit; emits the residual curve and the trace.
SuiteOutcome run_wrga_rate(const WrgaRateParams& prm);
GreedyTrace wrga_rate_trace(const WrgaRateParams& prm);

// ---- JSON config front end ----------------------------------------------

struct ParsedConfig {
  std::string kind;
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  // exactly one of these is engaged, matching kind
  WrgaRateParams wrga_rate;
  RecursionSuiteParams recursion;
  SigmaSuiteParams sigma;
  HullRateParams hull_rate;
  EntropyCurveParams entropy_curve;
  BallNetParams ball_net;
  MultiscaleParams multiscale;
};

// Strict parse: unknown fields are rejected, errors carry the field path.
ParsedConfig parse_config(const std::string& json_text);

// Runs the experiment named by the config and writes its artifacts under
// config.out_dir. Returns the outcome (artifacts already written).
SuiteOutcome run_config(const ParsedConfig& config);

void write_artifacts(const std::string& out_dir, const SuiteOutcome& outcome);

}  // namespace lpgreedy

#endif
