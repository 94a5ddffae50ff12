#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "binomix/error.hpp"
#include "binomix/estimator.hpp"
#include "binomix/io.hpp"

using namespace binomix;
namespace fs = std::filesystem;

namespace {

BinomialSample read(const std::string& text) {
  std::istringstream in(text);
  return io::read_binomial_csv(in, "mem");
}

std::string error_of(const std::string& text) {
  try {
    read(text);
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

fs::path scratch_dir() {
  auto d = fs::temp_directory_path() / ("binomix_io_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("number formatting round-trips") {
  CHECK(io::format_double(0.0) == "0");
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(io::format_double(-2.0) == "-2");
  std::mt19937_64 g(1);
  std::uniform_real_distribution<double> d(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = d(g) * std::pow(10.0, (i % 40) - 20);
    CHECK(std::strtod(io::format_double(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("binomial csv: valid input") {
  const auto s = read("successes,trials\n3,10\n");
  REQUIRE(s.size() == 1);
  CHECK(s.successes()[0] == 3);
  CHECK(s.trials()[0] == 10);
  const auto t = read("# comment\ntrials,group,successes\n\n10,1,3\n 5 , 0 , 5 \n");
  REQUIRE(t.size() == 2);
  CHECK(t.successes()[1] == 5);
  CHECK(t.groups()[0] == 1);
  CHECK(t.has_groups());
  const auto crlf = read("successes,trials\r\n1,2\r\n");
  CHECK(crlf.size() == 1);
}

TEST_CASE("binomial csv: row-level diagnostics") {
  CHECK(error_of("successes,trials\n").find("no data rows") != std::string::npos);
  CHECK(error_of("").find("empty") != std::string::npos);
  CHECK(error_of("successes,total\n1,2\n").find("missing column 'trials'") != std::string::npos);
  CHECK(error_of("successes,trials\n1,2\n3.5,4\n").find("line 3") != std::string::npos);
  CHECK(error_of("successes,trials\n1,2\n3.5,4\n").find("not an integer") != std::string::npos);
  CHECK(error_of("successes,trials\n5,4\n").find("successes must lie") != std::string::npos);
  CHECK(error_of("successes,trials\n-1,4\n").find("line 2") != std::string::npos);
  CHECK(error_of("successes,trials\n1,0\n").find("trials must be >= 1") != std::string::npos);
  CHECK(error_of("successes,trials\n1\n").find("expected 2") != std::string::npos);
  CHECK(error_of("successes,trials,group\n1,2,7\n").find("group must be 0 or 1") != std::string::npos);
}

TEST_CASE("input summary recomputes the harmonic mean") {
  std::ostringstream text;
  text << "successes,trials\n";
  std::mt19937_64 g(2);
  std::vector<std::int64_t> trials;
  for (int i = 0; i < 500; ++i) {
    const std::int64_t t = i == 0 ? 1 : (i == 1 ? 24740 : std::uniform_int_distribution<std::int64_t>(1, 24740)(g));
    trials.push_back(t);
    text << t / 3 << "," << t << "\n";
  }
  const auto s = read(text.str());
  const auto sum = io::summarize_input(s);
  CHECK(sum.n == 500);
  CHECK(sum.t_min == 1);
  CHECK(sum.t_max == 24740);
  CHECK(sum.t_tilde == doctest::Approx(harmonic_mean(trials)).epsilon(1e-14));
}

TEST_CASE("proportion csv") {
  std::istringstream in("value,group\n0.2,1\n0.7,0\n");
  const auto s = io::read_proportions_csv(in, "mem");
  CHECK(s.size() == 2);
  CHECK_FALSE(s.binomial());
  std::istringstream bad("value,group\n1.2,1\n");
  CHECK_THROWS_AS(io::read_proportions_csv(bad, "mem"), DataError);
}

TEST_CASE("csv rendering") {
  io::CsvTable t;
  t.meta = {"binomix 0.1.0", "command: estimate"};
  t.header = {"u", "estimate"};
  t.rows = {{"0.5", "1.25"}};
  CHECK(io::render_csv(t) == "# binomix 0.1.0\n# command: estimate\nu,estimate\n0.5,1.25\n");
  t.meta.clear();
  t.rows = {{"beta:2,2", "say \"hi\""}};
  CHECK(io::render_csv(t) == "u,estimate\n\"beta:2,2\",\"say \"\"hi\"\"\"\n");
}

TEST_CASE("atomic output and config files") {
  const auto dir = scratch_dir();
  const auto out = dir / "out.csv";
  io::write_output(out.string(), "first\n");
  io::write_output(out.string(), "second\n");
  CHECK(slurp(out) == "second\n");
  for (const auto& e : fs::directory_iterator(dir)) CHECK(e.path().extension() != ".tmp");
  CHECK_THROWS_AS(io::write_output((dir / "missing" / "x.csv").string(), "x"), DataError);

  const auto cfg = dir / "run.cfg";
  {
    std::ofstream f(cfg);
    f << "# defaults\nh = 0.2\n\nkernel=legendre  # trailing\n";
  }
  const auto m = io::read_config(cfg.string());
  CHECK(m.at("h") == "0.2");
  CHECK(m.at("kernel") == "legendre");
  {
    std::ofstream f(cfg);
    f << "h 0.2\n";
  }
  CHECK_THROWS_AS(io::read_config(cfg.string()), DataError);
  CHECK_THROWS_AS(io::parse_input((dir / "nope.csv").string()), DataError);
  fs::remove_all(dir);
}

TEST_CASE("list parsing") {
  const auto r = io::parse_real_list("0.1:0.9:0.1");
  REQUIRE(r.size() == 9);
  CHECK(r.front() == 0.1);
  CHECK(r.back() == 0.9);
  CHECK(r[2] == 0.3);
  CHECK(io::parse_real_list("0.2:2:0.1").size() == 19);
  CHECK(io::parse_real_list("0.5, 0.25") == std::vector<double>{0.5, 0.25});
  CHECK(io::parse_int_list("30:100:5").size() == 15);
  CHECK(io::parse_int_list("500,2000") == std::vector<std::int64_t>{500, 2000});
  CHECK_THROWS_AS(io::parse_int_list("1.5"), std::invalid_argument);
  CHECK_THROWS_AS(io::parse_real_list("1:0:0.1"), std::invalid_argument);
  CHECK_THROWS_AS(io::parse_real_list("0:1:0"), std::invalid_argument);
  CHECK_THROWS_AS(io::parse_real_list("a,b"), std::invalid_argument);
  CHECK_THROWS_AS(io::parse_real_list("1:2"), std::invalid_argument);
}
