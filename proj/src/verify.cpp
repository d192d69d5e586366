#include "lpgreedy/verify.hpp"

#include "lpgreedy/harness.hpp"
#include "lpgreedy/io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <future>

namespace lpgreedy {

namespace {

CriterionResult from_outcome(int id, const std::string& name,
                             const SuiteOutcome& outcome) {
  return CriterionResult{id, name, outcome.pass, outcome.detail};
}

}  // namespace

std::vector<CriterionResult> run_criteria(std::uint64_t seed,
                                          const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto keep = [out_dir](const SuiteOutcome& outcome) {
    write_artifacts(out_dir, outcome);
    return outcome;
  };

  // Independent jobs with disjoint artifacts; results are collected in
  // criterion order, so the summary does not depend on scheduling.
  using Job = std::function<std::vector<CriterionResult>()>;
  std::vector<Job> jobs;
  jobs.push_back([=] {
    DualityParams prm;
    prm.seed = seed;
    return std::vector<CriterionResult>{
        from_outcome(1, "duality suite", keep(run_duality_suite(prm)))};
  });
  jobs.push_back([=] {
    return std::vector<CriterionResult>{
        from_outcome(2, "worked greedy example", keep(run_worked_example()))};
  });
  jobs.push_back([=] {
    RecursionSuiteParams prm;
    prm.seed = seed;
    const SuiteOutcome outcome = keep(run_recursion_suite(prm));
    CriterionResult c3{3, "recursion inequality suite",
                       outcome.metric("violations", 1.0) == 0.0,
                       std::to_string(static_cast<long>(outcome.metric("violations"))) +
                           " violations over " +
                           std::to_string(static_cast<long>(outcome.metric("checked"))) +
                           " checked steps"};
    CriterionResult c4{4, "decay-rate shape",
                       outcome.metric("rate_failures", 1.0) == 0.0,
                       std::to_string(static_cast<long>(outcome.metric("rate_failures"))) +
                           " runs above the slope bound (worst margin " +
                           format_g17(outcome.metric("worst_slope_margin")) + ")"};
    return std::vector<CriterionResult>{c3, c4};
  });
  jobs.push_back([=] {
    HilbertSuiteParams prm;
    prm.seed = seed;
    return std::vector<CriterionResult>{
        from_outcome(5, "Hilbert boundedness", keep(run_hilbert_suite(prm)))};
  });
  jobs.push_back([=] {
    OffsetParams prm;
    prm.seed = seed;
    return std::vector<CriterionResult>{
        from_outcome(6, "offset convergence", keep(run_offset_suite(prm)))};
  });
  jobs.push_back([=] {
    SigmaSuiteParams prm;
    prm.seed = seed;
    return std::vector<CriterionResult>{
        from_outcome(7, "m-term oracle agreement and tail bound",
                     keep(run_sigma_suite(prm)))};
  });
  jobs.push_back([=] {
    HullRateParams prm;
    prm.seed = seed;
    return std::vector<CriterionResult>{
        from_outcome(8, "two-stage hull rate", keep(run_hull_rate(prm)))};
  });
  jobs.push_back([=] {
    BallNetParams prm;
    prm.seed = seed;
    const SuiteOutcome outcome = keep(run_ball_net(prm));
    CriterionResult c9{9, "ball grid nets",
                       outcome.metric("net_violations", 1.0) == 0.0,
                       std::to_string(static_cast<long>(outcome.metric("net_violations"))) +
                           " grid-net violations"};
    CriterionResult c10{10, "net composition",
                        outcome.metric("compose_ok") == 1.0,
                        "composed coverage max " +
                            format_g17(outcome.metric("compose_max"))};
    return std::vector<CriterionResult>{c9, c10};
  });
  jobs.push_back([=] {
    MultiscaleParams prm;
    prm.seed = seed;
    return std::vector<CriterionResult>{
        from_outcome(11, "multiscale composer", keep(run_multiscale(prm)))};
  });
  jobs.push_back([=] {
    EntropyCurveParams prm;
    prm.seed = seed;
    return std::vector<CriterionResult>{
        from_outcome(12, "entropy brackets", keep(run_entropy_curve(prm)))};
  });

  std::vector<std::future<std::vector<CriterionResult>>> futures;
  futures.reserve(jobs.size());
  for (Job& job : jobs)
    futures.push_back(std::async(std::launch::async, std::move(job)));
  std::vector<CriterionResult> results;
  for (auto& f : futures)
    for (CriterionResult& r : f.get()) results.push_back(std::move(r));
  std::sort(results.begin(), results.end(),
            [](const CriterionResult& a, const CriterionResult& b) {
              return a.id < b.id;
            });

  CsvWriter summary({"criterion", "name", "pass", "detail"});
  for (const auto& r : results)
    summary.row_mixed({std::to_string(r.id), r.name, r.pass ? "1" : "0",
                       "\"" + r.detail + "\""});
  write_file_atomic(out_dir + "/summary.csv", summary.str());
  return results;
}

std::vector<CriterionResult> verify_all(std::uint64_t seed,
                                        const std::string& out_dir) {
  std::vector<CriterionResult> results = run_criteria(seed, out_dir + "/run_a");
  run_criteria(seed, out_dir + "/run_b");
  const std::string diff = compare_dirs(out_dir + "/run_a", out_dir + "/run_b");
  CriterionResult c13{13, "byte reproducibility", diff.empty(),
                      diff.empty() ? "run_a and run_b are byte-identical" : diff};
  results.push_back(c13);
  return results;
}

std::string format_criteria(const std::vector<CriterionResult>& results) {
  std::string s;
  for (const auto& r : results) {
    s += r.pass ? "[PASS]" : "[FAIL]";
    s += " C" + std::to_string(r.id) + " " + r.name + ": " + r.detail + "\n";
  }
  return s;
}

bool all_pass(const std::vector<CriterionResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

}  // namespace lpgreedy
