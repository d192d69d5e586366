#ifndef LPGREEDY_IO_HPP
#define LPGREEDY_IO_HPP

#include <string>
#include <vector>

namespace lpgreedy {

// %.17g: enough digits for an exact double round trip, stable across runs.
std::string format_g17(double v);

// CSV with a header row, LF line endings, numbers at 17 significant digits.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<double>& values);
  void row_mixed(const std::vector<std::string>& values);
  const std::string& str() const { return body_; }
  std::size_t columns() const { return n_cols_; }

 private:
  std::string body_;
  std::size_t n_cols_;
};

// Writes via a temp file + rename so partially written artifacts never land.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

// Byte compare of two directory trees (regular files, recursive).
// Returns a description of the first difference, or empty when identical.
std::string compare_dirs(const std::string& a, const std::string& b);

}  // namespace lpgreedy

#endif
