#pragma once

#include <cstdint>
#include <random>

#include "orthostab/linalg.hpp"

namespace orthostab {

std::uint64_t splitmix64(std::uint64_t x);

// Seed for worker/stream `index` derived from a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Seeded stream of scalars and vectors. std::mt19937_64's output is fixed
/// by the standard; conversions to doubles are done here rather than with
/// std:: distributions so streams match across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01();                         // [0, 1)
  double uniform(double lo, double hi);       // [lo, hi)
  double log_uniform(double lo, double hi);   // log-uniform on [lo, hi)
  double normal();
  Vector direction(std::size_t dim);          // uniform on the L2 sphere

 private:
  std::mt19937_64 engine_;
};

}  // namespace orthostab
