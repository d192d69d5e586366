#ifndef LPGREEDY_VERIFY_HPP
#define LPGREEDY_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace lpgreedy {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

// Criteria 1-12, artifacts under out_dir. Deterministic given the seed.
std::vector<CriterionResult> run_criteria(std::uint64_t seed,
                                          const std::string& out_dir);

// Full gate: criteria 1-12 into <out_dir>/run_a, an identical second pass
// into <out_dir>/run_b, and the byte comparison of the two trees as the
// reproducibility criterion.
std::vector<CriterionResult> verify_all(std::uint64_t seed,
                                        const std::string& out_dir);

std::string format_criteria(const std::vector<CriterionResult>& results);
bool all_pass(const std::vector<CriterionResult>& results);

}  // namespace lpgreedy

#endif
