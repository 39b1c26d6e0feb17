#pragma once

#include <Eigen/Dense>
#include <complex>

namespace qlrs::test {

// Largest |A - B| over the interior block (indices below dim - ceil(dim/8)),
// where truncation artifacts cannot reach.
inline double max_abs_diff_interior(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const int n = static_cast<int>(a.rows());
  const int interior = n - (n + 7) / 8;
  double worst = 0.0;
  for (int i = 0; i < interior; ++i) {
    for (int j = 0; j < interior; ++j) {
      worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
    }
  }
  return worst;
}

inline double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace qlrs::test
