#pragma once

#include <cmath>
#include <utility>

namespace qlrs {

// Golden-section maximization on [lo, hi] for unimodal f. Deterministic:
// fixed shrink schedule, returns the best point actually evaluated.
template <typename F>
std::pair<double, double> golden_section_max(F&& f, double lo, double hi,
                                             double x_tol = 1e-10, int max_iter = 200) {
  static const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  double best_x = (fc >= fd) ? c : d;
  double best_f = (fc >= fd) ? fc : fd;
  for (int i = 0; i < max_iter && (b - a) > x_tol; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    if (fc > best_f) {
      best_f = fc;
      best_x = c;
    }
    if (fd > best_f) {
      best_f = fd;
      best_x = d;
    }
  }
  return {best_x, best_f};
}

}  // namespace qlrs
