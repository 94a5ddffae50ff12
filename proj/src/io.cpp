#include "binomix/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "binomix/error.hpp"
#include "binomix/estimator.hpp"

namespace binomix::io {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, sep)) out.push_back(trim(tok));
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

bool skip_line(const std::string& line) {
  const std::string t = trim(line);
  return t.empty() || t[0] == '#';
}

template <class T>
bool parse_number(const std::string& s, T& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::string where(const std::string& source, std::size_t line) {
  return source + ": line " + std::to_string(line) + ": ";
}

struct Header {
  std::map<std::string, std::size_t> col;
  std::size_t width = 0;
};

Header read_header(std::istream& in, const std::string& source, std::size_t& line_no,
                   const std::vector<std::string>& required) {
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    Header h;
    const auto cols = split(line, ',');
    h.width = cols.size();
    for (std::size_t i = 0; i < cols.size(); ++i) h.col[cols[i]] = i;
    for (const auto& r : required)
      if (!h.col.count(r)) throw DataError(where(source, line_no) + "missing column '" + r + "'");
    return h;
  }
  throw DataError(source + ": empty file (no header)");
}

std::vector<std::string> read_row(const std::string& line, const Header& h,
                                  const std::string& source, std::size_t line_no) {
  auto cells = split(line, ',');
  if (cells.size() != h.width)
    throw DataError(where(source, line_no) + "expected " + std::to_string(h.width) +
                    " fields, found " + std::to_string(cells.size()));
  return cells;
}

std::int64_t int_field(const std::vector<std::string>& cells, const Header& h,
                       const std::string& name, const std::string& source, std::size_t line_no) {
  std::int64_t v = 0;
  const std::string& c = cells[h.col.at(name)];
  if (!parse_number(c, v))
    throw DataError(where(source, line_no) + name + " '" + c + "' is not an integer");
  return v;
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open input file '" + path + "'");
  return in;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

BinomialSample read_binomial_csv(std::istream& in, const std::string& source) {
  std::size_t line_no = 0;
  const Header h = read_header(in, source, line_no, {"successes", "trials"});
  const bool has_group = h.col.count("group") > 0;
  std::vector<std::int64_t> x, t;
  std::vector<int> g;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    const auto cells = read_row(line, h, source, line_no);
    const auto xi = int_field(cells, h, "successes", source, line_no);
    const auto ti = int_field(cells, h, "trials", source, line_no);
    if (ti < 1) throw DataError(where(source, line_no) + "trials must be >= 1");
    if (xi < 0 || xi > ti)
      throw DataError(where(source, line_no) + "successes must lie in [0, trials]");
    x.push_back(xi);
    t.push_back(ti);
    if (has_group) {
      const auto gi = int_field(cells, h, "group", source, line_no);
      if (gi != 0 && gi != 1) throw DataError(where(source, line_no) + "group must be 0 or 1");
      g.push_back(static_cast<int>(gi));
    }
  }
  if (x.empty()) throw DataError(source + ": no data rows");
  return BinomialSample(std::move(x), std::move(t), std::move(g));
}

BinomialSample parse_input(const std::string& path) {
  auto in = open(path);
  return read_binomial_csv(in, path);
}

TwoGroupSample read_proportions_csv(std::istream& in, const std::string& source) {
  std::size_t line_no = 0;
  const Header h = read_header(in, source, line_no, {"value", "group"});
  std::vector<double> v;
  std::vector<int> g;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    const auto cells = read_row(line, h, source, line_no);
    double q = 0.0;
    const std::string& c = cells[h.col.at("value")];
    if (!parse_number(c, q))
      throw DataError(where(source, line_no) + "value '" + c + "' is not a number");
    if (!(q >= 0.0 && q <= 1.0)) throw DataError(where(source, line_no) + "value must lie in [0, 1]");
    const auto gi = int_field(cells, h, "group", source, line_no);
    if (gi != 0 && gi != 1) throw DataError(where(source, line_no) + "group must be 0 or 1");
    v.push_back(q);
    g.push_back(static_cast<int>(gi));
  }
  if (v.empty()) throw DataError(source + ": no data rows");
  return TwoGroupSample::from_proportions(std::move(v), std::move(g));
}

TwoGroupSample parse_proportions(const std::string& path) {
  auto in = open(path);
  return read_proportions_csv(in, path);
}

InputSummary summarize_input(const BinomialSample& s) {
  InputSummary r;
  r.n = s.size();
  if (s.empty()) return r;
  r.t_tilde = harmonic_mean(s.trials());
  const auto [lo, hi] = std::minmax_element(s.trials().begin(), s.trials().end());
  r.t_min = *lo;
  r.t_max = *hi;
  return r;
}

std::string render_csv(const CsvTable& t) {
  std::string out;
  for (const auto& m : t.meta) out += "# " + m + "\n";
  auto join = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      const std::string& c = cells[i];
      if (c.find_first_of(",\"\n") == std::string::npos) {
        out += c;
        continue;
      }
      out += '"';
      for (char ch : c) {
        if (ch == '"') out += '"';
        out += ch;
      }
      out += '"';
    }
    out += '\n';
  };
  join(t.header);
  for (const auto& r : t.rows) join(r);
  return out;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    std::cout.flush();
    return;
  }
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw DataError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw DataError("cannot move output into place at '" + path + "': " + ec.message());
  }
}

std::map<std::string, std::string> read_config(const std::string& path) {
  auto in = open(path);
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DataError(where(path, line_no) + "expected key = value");
    std::string key = trim(line.substr(0, eq));
    while (!key.empty() && key[0] == '-') key.erase(0, 1);
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw DataError(where(path, line_no) + "empty key");
    out[key] = value;
  }
  return out;
}

std::vector<double> parse_real_list(const std::string& text) {
  auto num = [&](const std::string& s) {
    double v = 0.0;
    if (!parse_number(trim(s), v)) throw std::invalid_argument("bad number '" + s + "' in list");
    return v;
  };
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw std::invalid_argument("expected start:stop:step, got '" + text + "'");
    const double a = num(parts[0]), b = num(parts[1]), step = num(parts[2]);
    if (!(step > 0.0) || b < a) throw std::invalid_argument("range needs step > 0 and stop >= start");
    const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9)) + 1;
    if (count > 10'000'000) throw std::invalid_argument("range has too many points");
    for (long i = 0; i < count; ++i) {
      // round to kill accumulated binary noise in the printed grid
      const double v = a + static_cast<double>(i) * step;
      out.push_back(std::round(v * 1e12) / 1e12);
    }
    return out;
  }
  for (const auto& tok : split(text, ',')) out.push_back(num(tok));
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
  std::vector<std::int64_t> out;
  for (double v : parse_real_list(text)) {
    if (v != std::floor(v)) throw std::invalid_argument("expected integers in '" + text + "'");
    out.push_back(static_cast<std::int64_t>(v));
  }
  return out;
}

}  // namespace binomix::io
