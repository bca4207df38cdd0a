#pragma once

// Batch kernels over pair lists and probe sets. Each has an OpenMP version
// and a serial reference; both fill one slot per index, and any reduction
// runs afterwards in index order, so the results are bit-identical.

#include <cstddef>
#include <exception>
#include <span>
#include <vector>

#include "orthostab/exec.hpp"
#include "orthostab/function_models.hpp"
#include "orthostab/hyers.hpp"
#include "orthostab/orthogonality.hpp"

namespace orthostab {

namespace kernels {

template <class T, class F>
std::vector<T> map_serial(std::size_t n, F&& fn) {
  std::vector<T> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(fn(i));
  return out;
}

template <class T, class F>
std::vector<T> map_parallel(std::size_t n, F&& fn) {
  std::vector<T> out(n);
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out[k] = fn(k);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  // Rethrow the lowest-index failure, as the serial loop would.
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

template <class T, class F>
std::vector<T> map_indices(Exec exec, std::size_t n, F&& fn) {
  return exec == Exec::Parallel ? map_parallel<T>(n, fn) : map_serial<T>(n, fn);
}

struct MaxResult {
  double value = 0.0;
  std::size_t index = 0;
};

// Maximum with the lowest index on ties; NaN counts as +infinity.
MaxResult max_of(std::span<const double> values);

std::vector<double> premise_residuals(const PexiderTriple& triple, std::span<const VectorPair> pairs,
                                      Exec exec);
std::vector<double> jensen_residuals(const VectorMap& map, std::span<const VectorPair> pairs, Exec exec);
// ||map(x + y) - map(x) - map(y) + map(0)||, the additivity defect of map - map(0).
std::vector<double> additivity_residuals(const VectorMap& map, std::span<const VectorPair> pairs,
                                         Exec exec);
std::vector<HyersTrace> hyers_batch(const VectorMap& f, std::span<const Vector> probes,
                                    const HyersOptions& opts, HyersScaling scaling, Exec exec);

}  // namespace kernels
}  // namespace orthostab
