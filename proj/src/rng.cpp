#include "binomix/rng.hpp"

#include <algorithm>

namespace binomix::rng {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t p : path) h = splitmix64(h ^ splitmix64(p + 0x632be59bd9b4e019ULL));
  return h;
}

double beta22(Engine& eng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double a = unif(eng), b = unif(eng), c = unif(eng);
  return std::max(std::min(a, b), std::min(std::max(a, b), c));
}

}  // namespace binomix::rng
