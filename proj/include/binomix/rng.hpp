#pragma once

// Seeded random streams for reproducible simulation.
//
// Every stochastic unit of work (a bootstrap draw, a simulation replication)
// owns an engine derived from (master seed, path of indices). Results then do
// not depend on how work is spread over threads.

#include <cstdint>
#include <initializer_list>
#include <random>

namespace binomix::rng {

using Engine = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

/// Seed for the stream addressed by `path` under `master`.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

inline Engine stream(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  return Engine(derive_seed(master, path));
}

/// Beta(2,2) draw: the median of three independent uniforms has exactly this law.
double beta22(Engine& eng);

}  // namespace binomix::rng
