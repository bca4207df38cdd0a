#pragma once

// Brute-force reference computations used to cross-check the library. They
// share no code with the implementations under test beyond Vector storage.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "orthostab/linalg.hpp"

namespace oracle {

// Direct textbook formulas, no rescaling.
inline double norm(const orthostab::NormSpec& n, const std::vector<double>& x) {
  std::vector<double> v = x;
  if (!n.weights.empty()) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= n.weights[i];
  }
  switch (n.kind) {
    case orthostab::NormKind::L1: {
      double s = 0.0;
      for (double c : v) s += std::fabs(c);
      return s;
    }
    case orthostab::NormKind::L2: {
      double s = 0.0;
      for (double c : v) s += c * c;
      return std::sqrt(s);
    }
    case orthostab::NormKind::LInf: {
      double m = 0.0;
      for (double c : v) m = std::max(m, std::fabs(c));
      return m;
    }
    case orthostab::NormKind::Lp: {
      double s = 0.0;
      for (double c : v) s += std::pow(std::fabs(c), n.p);
      return std::pow(s, 1.0 / n.p);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

inline double norm(const orthostab::NormSpec& n, const orthostab::Vector& x) { return norm(n, x.data()); }

inline std::vector<double> combo(const orthostab::Vector& x, double l, const orthostab::Vector& y) {
  std::vector<double> v(x.dim());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = x[i] + l * y[i];
  return v;
}

struct GridMin {
  double lambda;
  double value;
};

// min over lambda in [lo, hi] of ||x + lambda y||: a uniform grid of n points,
// then a second uniform grid of n points across the two cells around the best
// node. For a convex function the true minimizer lies in those cells, so the
// result is within a second-stage cell of the minimum.
inline GridMin min_on_grid(const orthostab::NormSpec& nspec, const orthostab::Vector& x,
                           const orthostab::Vector& y, double lo, double hi, int n = 100000) {
  auto f = [&](double l) { return norm(nspec, combo(x, l, y)); };
  auto scan = [&](double a, double b) {
    GridMin best{a, f(a)};
    for (int i = 1; i < n; ++i) {
      const double l = a + (b - a) * i / (n - 1);
      const double v = f(l);
      if (v < best.value) best = {l, v};
    }
    return best;
  };
  const GridMin coarse = scan(lo, hi);
  const double h = (hi - lo) / (n - 1);
  return scan(std::max(lo, coarse.lambda - h), std::min(hi, coarse.lambda + h));
}

inline double bj_bracket(const orthostab::NormSpec& n, const orthostab::Vector& x, const orthostab::Vector& y) {
  return 2.0 * norm(n, x) / norm(n, y);
}

}  // namespace oracle
