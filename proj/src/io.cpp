#include "lpgreedy/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fs = std::filesystem;

namespace lpgreedy {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : n_cols_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) body_ += ',';
    body_ += header[i];
  }
  body_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != n_cols_)
    throw std::invalid_argument("CsvWriter: wrong column count");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) body_ += ',';
    body_ += format_g17(values[i]);
  }
  body_ += '\n';
}

void CsvWriter::row_mixed(const std::vector<std::string>& values) {
  if (values.size() != n_cols_)
    throw std::invalid_argument("CsvWriter: wrong column count");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) body_ += ',';
    body_ += values[i];
  }
  body_ += '\n';
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for write: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for read: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string compare_dirs(const std::string& a, const std::string& b) {
  std::set<std::string> rel;
  for (const std::string& root : {a, b}) {
    if (!fs::exists(root)) return "missing directory: " + root;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
      if (e.is_regular_file())
        rel.insert(fs::relative(e.path(), root).generic_string());
    }
  }
  for (const std::string& r : rel) {
    const fs::path pa = fs::path(a) / r;
    const fs::path pb = fs::path(b) / r;
    if (!fs::exists(pa)) return "only in " + b + ": " + r;
    if (!fs::exists(pb)) return "only in " + a + ": " + r;
    if (read_file(pa.string()) != read_file(pb.string()))
      return "content differs: " + r;
  }
  return {};
}

}  // namespace lpgreedy
