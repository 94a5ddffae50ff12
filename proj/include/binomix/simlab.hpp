#pragma once

// Seeded Monte Carlo studies: heterogeneous versus clipped trials, joint
// versus separate tuning of the density difference, and CI coverage.
// Every replication draws from its own stream derived from (seed, study,
// configuration index, replication), so tables do not depend on the number
// of workers.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "binomix/rng.hpp"

namespace binomix {

/// Stream tags: replication r of configuration c draws from
/// rng::stream(seed, {tag, c, r}); coverage uses rng::stream(seed, {tag, r}).
inline constexpr std::uint64_t kSim1Stream = 0x53494d31ULL;
inline constexpr std::uint64_t kSim2Stream = 0x53494d32ULL;
inline constexpr std::uint64_t kCoverageStream = 0x434f5645ULL;

struct HeteroData {
  std::vector<std::int64_t> trials;
  std::vector<double> q;
  std::vector<std::int64_t> x;  // Bin(t_i, Q_i)
  std::vector<std::int64_t> y;  // Bin(t_min, Q_i)
  std::int64_t t_min = 1;
  std::size_t adjustments = 0;
};

/// Q_i ~ Beta(2,2), t_i ~ Poisson(target) (zeros redrawn), t_1 = ceil(0.2 target),
/// then single trials are moved until the harmonic mean is within 0.5 of target.
HeteroData dgp_heterogeneous(std::size_t n, double target, rng::Engine& eng);

struct MeanSe {
  double bias = 0.0;
  double se = 0.0;
};
/// mean - truth and the sample standard deviation (n - 1 denominator).
MeanSe summarize(std::span<const double> values, double truth);

struct Sim1Config {
  std::size_t n = 200;
  std::vector<double> targets{30, 35, 40, 45, 50, 55, 60, 65, 70, 75, 80, 85, 90, 95, 100};
  int replications = 300;
  std::optional<double> h;  // default n^(-1/5)
  std::uint64_t seed = 0;
  double u = 0.5;
  unsigned workers = 0;
};

struct Sim1Row {
  double t_tilde = 0.0;
  std::string estimator;  // "kde" or "clipped"
  double bias = 0.0;
  double se = 0.0;
};

std::vector<Sim1Row> run_sim1(const Sim1Config& cfg);

struct Sim2Config {
  std::vector<std::size_t> n_list{500, 2000};
  int replications = 200;
  std::vector<double> h_grid{0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1,
                             1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9, 2.0};
  std::vector<int> order_grid{2, 4, 6, 8};
  std::uint64_t seed = 0;
  double u = 0.5;
  double eps = 0.05;
  unsigned workers = 0;
};

struct Sim2Row {
  std::size_t n = 0;
  std::string method;  // "joint" or "separate"
  double bias = 0.0;
  double se = 0.0;
};

/// Per replication estimates at u for both methods, in replication order.
struct Sim2Draws {
  std::vector<double> joint;
  std::vector<double> separate;
};

std::vector<Sim2Row> run_sim2(const Sim2Config& cfg);
Sim2Draws run_sim2_draws(const Sim2Config& cfg, std::size_t n_index);

struct CoverageConfig {
  std::size_t n = 300;
  std::int64_t t = 3000;
  double h = 0.08;
  int replications = 500;
  std::uint64_t seed = 0;
  double alpha = 0.05;
  double u = 0.5;
  double s = 2.0;  // smoothness used for the bandwidth window diagnostic
  unsigned workers = 0;
};

struct CoverageResult {
  double coverage = 0.0;
  std::size_t covered = 0;
  std::size_t replications = 0;
  double zeta = 0.0;   // h = n^-zeta
  double gamma = 0.0;  // t = n^gamma
  bool in_window = false;
};

/// max(1/(2s+1), 1 - gamma) < zeta < 2 gamma - 1.
bool undersmoothing_window(double zeta, double gamma, double s);

CoverageResult run_coverage(const CoverageConfig& cfg);

}  // namespace binomix
