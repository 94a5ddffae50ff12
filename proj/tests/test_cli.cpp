#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const fs::path& workdir() {
  static const fs::path d = [] {
    auto p = fs::temp_directory_path() / ("binomix_cli_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return d;
}

Run run(const std::string& args) {
  const char* exe = std::getenv("BINOMIX_EXE");
  REQUIRE(exe != nullptr);
  const auto out = workdir() / "stdout.txt", err = workdir() / "stderr.txt";
  const std::string cmd = "cd '" + workdir().string() + "' && '" + exe + "' " + args + " >'" +
                          out.string() + "' 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);)
    if (!l.empty() && l[0] != '#') lines.push_back(l);
  return lines;
}

void write_file(const std::string& name, const std::string& text) {
  std::ofstream f(workdir() / name);
  f << text;
}

// Two-group binomial data with fixed contents.
void make_inputs() {
  static bool done = false;
  if (done) return;
  std::mt19937_64 g(12);
  std::ostringstream s;
  s << "successes,trials,group\n";
  for (int i = 0; i < 400; ++i) {
    const int t = std::uniform_int_distribution<int>(5, 90)(g);
    const double q = (std::uniform_real_distribution<double>(0, 1)(g) + std::uniform_real_distribution<double>(0, 1)(g)) / 2;
    s << std::binomial_distribution<int>(t, q)(g) << "," << t << "," << (i % 2) << "\n";
  }
  write_file("data.csv", s.str());
  write_file("header_only.csv", "successes,trials\n");
  write_file("bad_row.csv", "successes,trials\n1,2\n7,3\n");
  done = true;
}

}  // namespace

TEST_CASE("estimate on a grid") {
  make_inputs();
  const auto r = run("estimate --input data.csv --h 0.1 --grid 0.1:0.9:0.1");
  REQUIRE(r.code == 0);
  const auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 10);
  CHECK(lines[0] == "u,estimate");
  CHECK(lines[1].rfind("0.1,", 0) == 0);
  CHECK(lines[9].rfind("0.9,", 0) == 0);
  CHECK(r.out.rfind("# binomix 0.1.0\n# command: estimate\n", 0) == 0);
  CHECK(r.out.find("# seed: none") != std::string::npos);
  CHECK(r.err.find("n=400") != std::string::npos);
}

TEST_CASE("ci schema and json output") {
  make_inputs();
  const auto r = run("ci --input data.csv --h 0.2 --point 0.4");
  REQUIRE(r.code == 0);
  CHECK(data_lines(r.out)[0] == "u,estimate,se,ci_lo,ci_hi");
  const auto j = run("ci --input data.csv --h 0.2 --grid 0.3,0.6 --format json");
  REQUIRE(j.code == 0);
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["meta"]["command"] == "ci");
  REQUIRE(doc["rows"].size() == 2);
  CHECK(doc["rows"][0]["ci_lo"].get<double>() <= doc["rows"][0]["estimate"].get<double>());
}

TEST_CASE("lepski with a singleton grid") {
  make_inputs();
  const auto r = run("lepski --input data.csv --grid 0.3 --seed 1");
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["selected_h"].get<double>() == 0.3);
  CHECK(doc["trace"].size() == 1);
  const auto csv = run("lepski --input data.csv --seed 1 --format csv --boot-reps 200");
  REQUIRE(csv.code == 0);
  CHECK(data_lines(csv.out)[0] == "h,estimate,statistic,critical,rejected");
  CHECK(csv.out.find("# selected_h: ") != std::string::npos);
}

TEST_CASE("bernstein-check passes on the worked configuration") {
  const auto r = run("bernstein-check --density beta:2,2 --t-grid 10,50 --h-grid 0.1,0.2 --u-grid 0.5");
  REQUIRE(r.code == 0);
  const auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 5);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    CHECK(lines[i].rfind("\"beta:2,2\",", 0) == 0);
    CHECK(lines[i].substr(lines[i].size() - 5) == ",true");
  }
}

TEST_CASE("diff modes and tuning") {
  make_inputs();
  for (const char* tune : {"joint", "separate"}) {
    const auto r = run(std::string("diff --input data.csv --seed 4 --tune ") + tune +
                       " --grid-h 0.2,0.5,1 --grid-order 2,4 --grid 0.3,0.5");
    REQUIRE(r.code == 0);
    const auto lines = data_lines(r.out);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "u,tau_hat");
  }
  const auto fixed = run("diff --input data.csv --tune fixed --h 0.3 --kernel-order 4 --point 0.5");
  CHECK(fixed.code == 0);
}

TEST_CASE("exit codes and error lines") {
  make_inputs();
  auto r = run("estimate --input missing.csv --h 0.1");
  CHECK(r.code == 2);
  CHECK(r.err.rfind("error: code=2 kind=data", 0) == 0);
  r = run("estimate --input header_only.csv --h 0.1");
  CHECK(r.code == 2);
  CHECK(r.err.find("no data rows") != std::string::npos);
  r = run("estimate --input bad_row.csv --h 0.1");
  CHECK(r.code == 2);
  CHECK(r.err.find("line 3") != std::string::npos);
  r = run("estimate --input data.csv");
  CHECK(r.code == 1);
  CHECK(r.err.rfind("error: code=1 kind=usage", 0) == 0);
  r = run("estimate --input data.csv --h 0.1 --bogus");
  CHECK(r.code == 1);
  r = run("estimate --input data.csv --h -1");
  CHECK(r.code == 1);
  r = run("estimate --input data.csv --h 0.1 --point 1.5");
  CHECK(r.code == 1);
  r = run("lepski --input data.csv");
  CHECK(r.code == 1);
  CHECK(r.err.find("--seed") != std::string::npos);
  r = run("sim1 --reps 2");
  CHECK(r.code == 1);
  r = run("");
  CHECK(r.code == 1);
  // exactly one line on failure
  r = run("estimate --input missing.csv --h 0.1");
  CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
}

TEST_CASE("config files supply defaults; flags win") {
  make_inputs();
  write_file("run.cfg", "h = 0.3\npoint = 0.4\n");
  const auto a = run("estimate --input data.csv --config run.cfg");
  const auto b = run("estimate --input data.csv --h 0.3 --point 0.4");
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(data_lines(a.out) == data_lines(b.out));
  const auto c = run("estimate --input data.csv --config run.cfg --h 0.2");
  const auto d = run("estimate --input data.csv --h 0.2 --point 0.4");
  CHECK(data_lines(c.out) == data_lines(d.out));
}

TEST_CASE("stochastic commands are byte-identical across runs and worker counts") {
  make_inputs();
  const std::vector<std::string> cmds{
      "lepski --input data.csv --seed 9 --boot-reps 300",
      "diff --input data.csv --seed 9 --grid-h 0.2,0.6,1.2 --grid-order 2,6 --grid 0.2:0.8:0.2",
      "diff --input data.csv --seed 9 --tune separate --grid-h 0.2,0.6 --grid-order 2,4",
      "sim1 --seed 9 --n 100 --targets 30,60 --reps 12",
      "sim2 --seed 9 --n-list 100 --reps 4 --grid-h 0.3,1 --grid-order 2,4",
      "coverage --seed 9 --n 100 --t 500 --reps 30"};
  for (const auto& cmd : cmds) {
    CAPTURE(cmd);
    std::vector<std::string> outputs;
    for (const char* w : {"1", "1", "3"}) {
      const auto r = run(cmd + " --workers " + w + " --out out.txt");
      REQUIRE(r.code == 0);
      CHECK(r.out.empty());
      outputs.push_back(slurp(workdir() / "out.txt"));
    }
    CHECK_FALSE(outputs[0].empty());
    CHECK(outputs[0] == outputs[1]);
    CHECK(outputs[0] == outputs[2]);
    CHECK(outputs[0].find("seed") != std::string::npos);
  }
  const auto a = run("lepski --input data.csv --seed 9 --boot-reps 300");
  const auto b = run("lepski --input data.csv --seed 10 --boot-reps 300");
  CHECK(a.out != b.out);
}
