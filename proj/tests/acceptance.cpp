// Acceptance gate: runs every verification criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exit code is the number of
// failing criteria.

#include "lpgreedy/verify.hpp"

#include <cstdint>
#include <cstring>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
  std::string out_dir = "acceptance_out";
  std::uint64_t seed = 42;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--out") == 0 && i + 1 < argc) {
      out_dir = argv[++i];
    } else if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) {
      seed = std::stoull(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--out DIR] [--seed N]\n";
      return 64;
    }
  }
  const auto results = lpgreedy::verify_all(seed, out_dir);
  std::cout << lpgreedy::format_criteria(results);
  int failures = 0;
  for (const auto& r : results)
    if (!r.pass) ++failures;
  std::cout << (failures == 0 ? "all criteria passed\n"
                              : std::to_string(failures) + " criteria failed\n");
  return failures;
}
