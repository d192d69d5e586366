#include "lpgreedy/harness.hpp"
#include "lpgreedy/io.hpp"
#include "lpgreedy/verify.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

int cmd_run(const std::string& config_path) {
  const lpgreedy::ParsedConfig cfg =
      lpgreedy::parse_config(lpgreedy::read_file(config_path));
  if (cfg.kind == "verify-all") {
    const auto results = lpgreedy::verify_all(cfg.seed, cfg.out_dir);
    std::cout << lpgreedy::format_criteria(results);
    return lpgreedy::all_pass(results) ? 0 : 1;
  }
  const lpgreedy::SuiteOutcome outcome = lpgreedy::run_config(cfg);
  std::cout << (outcome.pass ? "[PASS] " : "[FAIL] ") << cfg.kind << ": "
            << outcome.detail << "\n";
  for (const auto& [name, content] : outcome.artifacts)
    std::cout << "wrote " << cfg.out_dir << "/" << name << " (" << content.size()
              << " bytes)\n";
  return outcome.pass ? 0 : 1;
}

int cmd_trace(const std::string& config_path, const std::string& out_path) {
  const lpgreedy::ParsedConfig cfg =
      lpgreedy::parse_config(lpgreedy::read_file(config_path));
  if (cfg.kind != "wrga-rate")
    throw std::invalid_argument("trace expects a wrga-rate config");
  const lpgreedy::GreedyTrace tr = lpgreedy::wrga_rate_trace(cfg.wrga_rate);
  const std::string body = lpgreedy::trace_to_jsonl(tr);
  if (out_path.empty())
    std::cout << body;
  else
    lpgreedy::write_file_atomic(out_path, body);
  return 0;
}

// reshape a CSV into (x, y, series) triples: column 0 is x, every other
// column is one series named by its header
int cmd_plot_data(const std::string& csv_path, const std::string& out_path) {
  std::istringstream in(lpgreedy::read_file(csv_path));
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("plot-data: empty csv");
  std::vector<std::string> header;
  {
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) header.push_back(cell);
  }
  if (header.size() < 2)
    throw std::invalid_argument("plot-data: need at least two columns");
  std::string result = "x,y,series\n";
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != header.size())
      throw std::invalid_argument("plot-data: ragged row");
    for (std::size_t c = 1; c < cells.size(); ++c)
      result += cells[0] + "," + cells[c] + "," + header[c] + "\n";
  }
  if (out_path.empty())
    std::cout << result;
  else
    lpgreedy::write_file_atomic(out_path, result);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"greedy m-term approximation and covering experiments in l_p^n"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "verify_out", out_path, csv_path;
  std::uint64_t seed = 42;

  CLI::App* run = app.add_subcommand("run", "run an experiment from a JSON config");
  run->add_option("config", config_path, "config file")->required();

  CLI::App* verify = app.add_subcommand("verify-all", "run the full verification suite");
  verify->add_option("--seed", seed, "top-level seed");
  verify->add_option("--out", out_dir, "output directory");

  CLI::App* trace = app.add_subcommand("trace", "emit a greedy trace as JSON lines");
  trace->add_option("config", config_path, "wrga-rate config file")->required();
  trace->add_option("--out", out_path, "output file (default stdout)");

  CLI::App* plot = app.add_subcommand("plot-data", "reshape a CSV into (x, y, series) triples");
  plot->add_option("csv", csv_path, "input csv")->required();
  plot->add_option("--out", out_path, "output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path);
    if (verify->parsed()) {
      const auto results = lpgreedy::verify_all(seed, out_dir);
      std::cout << lpgreedy::format_criteria(results);
      return lpgreedy::all_pass(results) ? 0 : 1;
    }
    if (trace->parsed()) return cmd_trace(config_path, out_path);
    if (plot->parsed()) return cmd_plot_data(csv_path, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
