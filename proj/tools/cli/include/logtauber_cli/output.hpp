#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace logtauber::cli {

/// 17 significant digits, '.' decimal point, independent of the C locale.
/// NaN and infinities print as nan, inf, -inf.
std::string format_number(double x);

/// RFC 4180 quoting when the field holds a comma, quote or newline.
std::string csv_field(std::string_view s);

/// Accumulates CSV text row by row.
class CsvWriter {
 public:
  void comment(std::string_view line);
  void header(const std::vector<std::string>& names);
  void row(const std::vector<std::string>& fields);
  const std::string& str() const noexcept { return text_; }

 private:
  std::string text_;
};

struct OutputFile {
  /// Empty for standard output.
  std::string path;
  std::string content;
};

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::string& path, const std::string& content);

/// "dir/run.csv" + "upper" -> "dir/run_upper.csv".
std::string sibling_path(const std::string& path, const std::string& suffix,
                         const std::string& extension);

}  // namespace logtauber::cli
