#include "qlrs/fock.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace qlrs {

FockSpace::FockSpace(int dim_) : dim(dim_) {
  if (dim < 2) throw std::invalid_argument("FockSpace dim must be >= 2");
}

bool FockSpace::admits(cplx alpha) const {
  const double a = std::abs(alpha);
  return a * a + 6.0 * a + 9.0 <= static_cast<double>(dim);
}

void FockSpace::require_admits(cplx alpha) const {
  if (!admits(alpha)) {
    throw TruncationOverflowError(
        "displacement |alpha|=" + std::to_string(std::abs(alpha)) +
        " violates truncation guard for dim=" + std::to_string(dim));
  }
}

namespace {
int tail_start(int dim) { return dim - (dim + 7) / 8; }

double tail_of(const Eigen::VectorXcd& amps, int fock_dim, int blocks) {
  const int start = tail_start(fock_dim);
  double tail = 0.0;
  for (int b = 0; b < blocks; ++b) {
    for (int n = start; n < fock_dim; ++n) {
      tail += std::norm(amps[b * fock_dim + n]);
    }
  }
  return tail;
}

void check_norm(double norm, double tol, const char* what) {
  if (std::abs(norm - 1.0) > tol) {
    throw NormDriftError(std::string(what) + ": norm " + std::to_string(norm) +
                         " deviates from 1 beyond tolerance");
  }
}
}  // namespace

MotionalState::MotionalState(Eigen::VectorXcd amplitudes, bool normalize)
    : amps_(std::move(amplitudes)) {
  if (amps_.size() < 2) throw std::invalid_argument("MotionalState needs dim >= 2");
  if (normalize) {
    const double n = amps_.norm();
    if (n == 0.0) throw std::invalid_argument("cannot normalize zero state");
    amps_ /= n;
  } else {
    check_norm(amps_.norm(), 1e-9, "MotionalState");
  }
}

double MotionalState::mean_n() const {
  double acc = 0.0;
  for (int n = 0; n < dim(); ++n) acc += n * std::norm(amps_[n]);
  return acc;
}

cplx MotionalState::mean_a() const {
  cplx acc = 0.0;
  for (int n = 0; n + 1 < dim(); ++n) {
    acc += std::conj(amps_[n]) * std::sqrt(double(n + 1)) * amps_[n + 1];
  }
  return acc;
}

double MotionalState::tail_population() const { return tail_of(amps_, dim(), 1); }

HybridState::HybridState(Eigen::VectorXcd amplitudes, SpinBasis basis, bool normalize,
                         double norm_tolerance)
    : amps_(std::move(amplitudes)), basis_(basis) {
  if (amps_.size() < 4 || amps_.size() % 2 != 0) {
    throw std::invalid_argument("HybridState needs even length >= 4");
  }
  if (normalize) {
    const double n = amps_.norm();
    if (n == 0.0) throw std::invalid_argument("cannot normalize zero state");
    amps_ /= n;
  } else {
    check_norm(amps_.norm(), norm_tolerance, "HybridState");
  }
}

HybridState HybridState::ground(const FockSpace& space) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2 * space.dim);
  v[0] = 1.0;
  return HybridState(std::move(v), SpinBasis::z, false);
}

Eigen::VectorXcd HybridState::spin_block(int s) const {
  return amps_.segment(s * fock_dim(), fock_dim());
}

std::pair<double, double> HybridState::spin_populations() const {
  const int n = fock_dim();
  return {amps_.head(n).squaredNorm(), amps_.tail(n).squaredNorm()};
}

double HybridState::mean_n() const {
  const int N = fock_dim();
  double acc = 0.0;
  for (int n = 0; n < N; ++n) {
    acc += n * (std::norm(amps_[n]) + std::norm(amps_[N + n]));
  }
  return acc;
}

double HybridState::tail_population() const { return tail_of(amps_, fock_dim(), 2); }

HybridState HybridState::to_basis(SpinBasis target) const {
  if (target == basis_) return *this;
  // Hadamard on the spin: |g> = (|+> + |->)/sqrt(2) and vice versa.
  const int N = fock_dim();
  Eigen::VectorXcd v(2 * N);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  v.head(N) = inv_sqrt2 * (amps_.head(N) + amps_.tail(N));
  v.tail(N) = inv_sqrt2 * (amps_.head(N) - amps_.tail(N));
  const double tol = std::max(1e-9, 2.0 * std::abs(amps_.norm() - 1.0));
  return HybridState(std::move(v), target, false, tol);
}

cplx HybridState::overlap(const HybridState& other) const {
  if (basis_ != other.basis_) {
    throw std::invalid_argument("spin basis tags must match before combining states");
  }
  if (amps_.size() != other.amps_.size()) {
    throw std::invalid_argument("state dimensions must match");
  }
  return amps_.dot(other.amps_);  // Eigen dot conjugates the left operand
}

double HybridState::fidelity(const HybridState& other) const {
  return std::norm(overlap(other));
}

MotionalState coherent_state(cplx alpha, const FockSpace& space) {
  space.require_admits(alpha);
  Eigen::VectorXcd v(space.dim);
  cplx c = std::exp(-0.5 * std::norm(alpha));
  for (int n = 0; n < space.dim; ++n) {
    v[n] = c;
    c *= alpha / std::sqrt(double(n + 1));
  }
  return MotionalState(std::move(v), true);
}

double laguerre_assoc(int n, int k, double x) {
  if (n < 0 || k < 0) throw std::invalid_argument("laguerre_assoc needs n, k >= 0");
  if (n == 0) return 1.0;
  double lm = 1.0;              // L_0^k
  double l = 1.0 + k - x;       // L_1^k
  for (int i = 1; i < n; ++i) {
    const double next = ((2.0 * i + 1.0 + k - x) * l - (i + k) * lm) / (i + 1.0);
    lm = l;
    l = next;
  }
  return l;
}

double ladder_coupling_F(int n, double eta) {
  if (n < 0) throw std::invalid_argument("ladder_coupling_F needs n >= 0");
  if (!(eta > 0.0 && eta < 1.0)) {
    throw std::invalid_argument("ladder_coupling_F needs 0 < eta < 1");
  }
  const double x = eta * eta;
  return std::exp(-0.5 * x) * std::sqrt(1.0 / (n + 1.0)) * laguerre_assoc(n, 1, x);
}

Eigen::MatrixXcd displacement_matrix(cplx alpha, const FockSpace& space) {
  const int N = space.dim;
  Eigen::MatrixXcd D(N, N);
  const double x = std::norm(alpha);
  const double envelope = std::exp(-0.5 * x);
  // Fill diagonal-by-diagonal: for m = n + d,
  //   <m|D|n> = exp(-x/2) sqrt(n!/m!) alpha^d L_n^d(x),
  // and the lower triangle follows with alpha -> -conj(alpha).
  for (int d = 0; d < N; ++d) {
    // prefactor alpha^d / sqrt(d!) built as a running product to avoid overflow
    cplx upper = envelope;
    cplx lower = envelope;
    for (int j = 1; j <= d; ++j) {
      upper *= alpha / std::sqrt(double(j));
      lower *= -std::conj(alpha) / std::sqrt(double(j));
    }
    double lm = 1.0;               // L_0^d
    double l = 1.0 + d - x;        // L_1^d
    for (int n = 0; n + d < N; ++n) {
      const double ln = (n == 0) ? 1.0 : l;
      D(n + d, n) = upper * ln;
      D(n, n + d) = lower * ln;
      if (n >= 1) {
        const double next = ((2.0 * n + 1.0 + d - x) * l - (n + d) * lm) / (n + 1.0);
        lm = l;
        l = next;
      }
      // sqrt(n!/m!) ratio update: multiply by sqrt((n+1)/(n+1+d))
      const double r = std::sqrt((n + 1.0) / (n + 1.0 + d));
      upper *= r;
      lower *= r;
    }
  }
  return D;
}

Eigen::MatrixXcd displacement_matrix_expm(cplx alpha, const FockSpace& space) {
  const int N = space.dim;
  Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(N, N);
  for (int n = 0; n + 1 < N; ++n) {
    const double s = std::sqrt(double(n + 1));
    K(n + 1, n) = alpha * s;             // alpha a^dag
    K(n, n + 1) = -std::conj(alpha) * s; // -conj(alpha) a
  }
  return K.exp();
}

Eigen::MatrixXcd ladder_lowering(const FockSpace& space) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(space.dim, space.dim);
  for (int n = 0; n + 1 < space.dim; ++n) a(n, n + 1) = std::sqrt(double(n + 1));
  return a;
}

Eigen::MatrixXcd nonlinear_ladder(double eta, const FockSpace& space) {
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(space.dim, space.dim);
  for (int n = 0; n + 1 < space.dim; ++n) A(n, n + 1) = ladder_coupling_F(n, eta);
  return A;
}

Eigen::VectorXd ladder_band(const FockSpace& space) {
  Eigen::VectorXd b(space.dim - 1);
  for (int n = 0; n + 1 < space.dim; ++n) b[n] = std::sqrt(double(n + 1));
  return b;
}

Eigen::VectorXd nonlinear_ladder_band(double eta, const FockSpace& space) {
  const double x = eta * eta;
  const double envelope = std::exp(-0.5 * x);
  Eigen::VectorXd b(space.dim - 1);
  double lm = 1.0;
  double l = 2.0 - x;
  for (int n = 0; n + 1 < space.dim; ++n) {
    const double ln = (n == 0) ? 1.0 : l;
    b[n] = envelope * std::sqrt(1.0 / (n + 1.0)) * ln;
    if (n >= 1) {
      const double next = ((2.0 * n + 2.0 - x) * l - (n + 1.0) * lm) / (n + 1.0);
      lm = l;
      l = next;
    }
  }
  return b;
}

HybridState ideal_cat(cplx alpha, const FockSpace& space) {
  space.require_admits(alpha);
  const MotionalState plus = coherent_state(alpha, space);
  const MotionalState minus = coherent_state(-alpha, space);
  Eigen::VectorXcd v(2 * space.dim);
  v.head(space.dim) = plus.amps();
  v.tail(space.dim) = minus.amps();
  return HybridState(std::move(v), SpinBasis::x, true);
}

}  // namespace qlrs
