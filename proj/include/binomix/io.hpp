#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "binomix/sample.hpp"

namespace binomix::io {

/// Shortest text that reads back to the same double.
std::string format_double(double v);

/// CSV with a header naming `successes`, `trials` and optionally `group`.
/// Blank lines and lines starting with '#' are skipped. Row errors carry the
/// 1-based line number.
BinomialSample read_binomial_csv(std::istream& in, const std::string& source);
BinomialSample parse_input(const std::string& path);

/// CSV with columns `value` (in [0, 1]) and `group`.
TwoGroupSample read_proportions_csv(std::istream& in, const std::string& source);
TwoGroupSample parse_proportions(const std::string& path);

struct InputSummary {
  std::size_t n = 0;
  double t_tilde = 0.0;
  std::int64_t t_min = 0;
  std::int64_t t_max = 0;
};
InputSummary summarize_input(const BinomialSample& s);

/// Comma-separated table with '#' metadata lines.
struct CsvTable {
  std::vector<std::string> meta;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
std::string render_csv(const CsvTable& t);

/// Writes to `path` through a temporary file and rename, or to stdout when
/// path is empty.
void write_output(const std::string& path, const std::string& content);

/// key = value lines; '#' starts a comment. Keys are flag names without dashes.
std::map<std::string, std::string> read_config(const std::string& path);

/// "a:b:step" (inclusive) or a comma list.
std::vector<double> parse_real_list(const std::string& text);
std::vector<std::int64_t> parse_int_list(const std::string& text);

}  // namespace binomix::io
