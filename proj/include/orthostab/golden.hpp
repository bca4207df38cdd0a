#pragma once

#include <cmath>
#include <utility>

namespace orthostab {

struct LineMinimum {
  double argmin = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

/// Golden-section search for a unimodal function on [lo, hi]. Stops once
/// the bracket is narrower than `width_tol`. Returns the best point that
/// was actually evaluated, so `value` is always an attained upper bound on
/// the minimum.
template <class F>
LineMinimum golden_section_minimize(F&& f, double lo, double hi, double width_tol,
                                    int max_iter = 300) {
  constexpr double kInvPhi = 0.6180339887498948482;
  LineMinimum best;
  auto eval = [&](double t) {
    const double v = f(t);
    ++best.evaluations;
    if (best.evaluations == 1 || v < best.value) {
      best.value = v;
      best.argmin = t;
    }
    return v;
  };

  if (hi < lo) std::swap(lo, hi);
  if (hi - lo <= width_tol) {
    eval(0.5 * (lo + hi));
    return best;
  }

  double c = hi - kInvPhi * (hi - lo);
  double d = lo + kInvPhi * (hi - lo);
  double fc = eval(c);
  double fd = eval(d);
  for (int it = 0; it < max_iter && hi - lo > width_tol; ++it) {
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kInvPhi * (hi - lo);
      fc = eval(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kInvPhi * (hi - lo);
      fd = eval(d);
    }
  }
  eval(0.5 * (lo + hi));
  return best;
}

}  // namespace orthostab
