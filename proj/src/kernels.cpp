#include "orthostab/kernels.hpp"

#include <cmath>
#include <limits>

namespace orthostab::kernels {

MaxResult max_of(std::span<const double> values) {
  MaxResult m;
  bool first = true;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = std::isnan(values[i]) ? std::numeric_limits<double>::infinity() : values[i];
    if (first || v > m.value) {
      m.value = v;
      m.index = i;
      first = false;
    }
  }
  return m;
}

std::vector<double> premise_residuals(const PexiderTriple& triple, std::span<const VectorPair> pairs,
                                      Exec exec) {
  return map_indices<double>(exec, pairs.size(), [&](std::size_t i) {
    return premise_residual(triple, pairs[i].first, pairs[i].second);
  });
}

std::vector<double> jensen_residuals(const VectorMap& map, std::span<const VectorPair> pairs, Exec exec) {
  return map_indices<double>(exec, pairs.size(), [&](std::size_t i) {
    const auto& [x, y] = pairs[i];
    return norm_inf(map(x + y) + map(x - y) - 2.0 * map(x));
  });
}

std::vector<double> additivity_residuals(const VectorMap& map, std::span<const VectorPair> pairs,
                                         Exec exec) {
  if (pairs.empty()) return {};
  const Vector at_zero = map(Vector(pairs.front().first.dim()));
  return map_indices<double>(exec, pairs.size(), [&](std::size_t i) {
    const auto& [x, y] = pairs[i];
    return norm_inf((map(x + y) - at_zero) - (map(x) - at_zero) - (map(y) - at_zero));
  });
}

std::vector<HyersTrace> hyers_batch(const VectorMap& f, std::span<const Vector> probes,
                                    const HyersOptions& opts, HyersScaling scaling, Exec exec) {
  return map_indices<HyersTrace>(exec, probes.size(),
                                 [&](std::size_t i) { return hyers_limit(f, probes[i], opts, scaling); });
}

}  // namespace orthostab::kernels
