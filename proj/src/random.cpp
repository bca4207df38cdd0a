#include "orthostab/random.hpp"

#include <cmath>
#include <numbers>

namespace orthostab {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ (index * 0xd1b54a32d192ed03ULL + 1));
}

double Rng::uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

double Rng::log_uniform(double lo, double hi) {
  return std::exp(uniform(std::log(lo), std::log(hi)));
}

double Rng::normal() {
  // Box-Muller; 1 - u keeps the log argument in (0, 1].
  const double u = 1.0 - uniform01();
  const double v = uniform01();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

Vector Rng::direction(std::size_t dim) {
  for (;;) {
    std::vector<double> c(dim);
    double s = 0.0;
    for (auto& v : c) {
      v = normal();
      s += v * v;
    }
    if (s > 1e-20) {
      const double inv = 1.0 / std::sqrt(s);
      for (auto& v : c) v *= inv;
      return Vector(std::move(c));
    }
  }
}

}  // namespace orthostab
