#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace pml::cli {

inline constexpr std::string_view kVersion = "0.1.0";

/// Exit codes of the executable.
inline constexpr int kSuccess = 0;
inline constexpr int kValidationFailure = 1;
inline constexpr int kUsageError = 2;

/// Runs one command line. `args` excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, char** argv);

/// %.17g: shortest fixed-width form that round-trips every double.
std::string format_double(double value);

std::string sha256_hex(std::string_view data);

/// Accumulates a CSV document: '#' metadata lines, a header row, data rows.
class CsvWriter {
 public:
  void meta(std::string_view key, std::string_view value);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& cells);

  static std::string cell(double value) { return format_double(value); }
  static std::string cell(long long value) { return std::to_string(value); }
  static std::string cell(int value) { return std::to_string(value); }
  static std::string cell(bool value) { return value ? "true" : "false"; }
  static std::string cell(std::string_view value) { return std::string(value); }

  const std::string& str() const { return text_; }
  std::size_t rows() const { return rows_; }

 private:
  std::string text_;
  std::size_t columns_ = 0;
  std::size_t rows_ = 0;
};

}  // namespace pml::cli
