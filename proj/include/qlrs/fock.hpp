#pragma once

#include <complex>
#include <Eigen/Dense>

#include "qlrs/errors.hpp"

namespace qlrs {

using cplx = std::complex<double>;

// Truncated harmonic-oscillator basis |0> ... |dim-1>.
struct FockSpace {
  explicit FockSpace(int dim);
  int dim;

  // Displacements are representable to ~1e-9 tail error when the truncation
  // guard dim >= |alpha|^2 + 6|alpha| + 9 holds (Poisson mean + 6 sigma).
  bool admits(cplx alpha) const;
  void require_admits(cplx alpha) const;
};

// Motional state: complex amplitudes over a truncated Fock basis.
class MotionalState {
 public:
  MotionalState(Eigen::VectorXcd amplitudes, bool normalize = true);

  const Eigen::VectorXcd& amps() const { return amps_; }
  int dim() const { return static_cast<int>(amps_.size()); }

  double norm() const { return amps_.norm(); }
  double mean_n() const;
  cplx mean_a() const;
  // Population in the top ceil(dim/8) levels of the basis.
  double tail_population() const;
  bool truncation_valid(double threshold) const { return tail_population() < threshold; }

 private:
  Eigen::VectorXcd amps_;
};

enum class SpinBasis { z, x };  // z: {|g>,|e>}, x: {|+>_x, |->_x}

// Two-level spin tensored with a truncated Fock space. Amplitudes are stored
// spin-major: [spin0 block | spin1 block], each block of length fock dim.
class HybridState {
 public:
  HybridState(Eigen::VectorXcd amplitudes, SpinBasis basis, bool normalize = true,
              double norm_tolerance = 1e-9);

  static HybridState ground(const FockSpace& space);  // |g> (x) |0>, z basis

  const Eigen::VectorXcd& amps() const { return amps_; }
  SpinBasis basis() const { return basis_; }
  int fock_dim() const { return static_cast<int>(amps_.size()) / 2; }

  Eigen::VectorXcd spin_block(int s) const;  // s in {0,1}
  double norm() const { return amps_.norm(); }

  // Population of the two spin states in the tagged basis.
  std::pair<double, double> spin_populations() const;
  double mean_n() const;
  double tail_population() const;
  bool truncation_valid(double threshold) const { return tail_population() < threshold; }

  HybridState to_basis(SpinBasis target) const;

  // |<this|other>|^2; basis tags must match.
  double fidelity(const HybridState& other) const;
  cplx overlap(const HybridState& other) const;

 private:
  Eigen::VectorXcd amps_;
  SpinBasis basis_;
};

// |alpha> with c_n = exp(-|alpha|^2/2) alpha^n / sqrt(n!), renormalized on the
// truncated basis. Throws if the truncation guard fails.
MotionalState coherent_state(cplx alpha, const FockSpace& space);

// Associated Laguerre polynomial L_n^k(x) by the three-term recurrence.
double laguerre_assoc(int n, int k, double x);

// Sideband coupling factor F(n) = exp(-eta^2/2) sqrt(1/(n+1)) L_n^1(eta^2).
// This is the |n> -> |n+1> coupling of the all-orders ladder operator; it
// changes sign at the first Laguerre zero, which caps reachable displacements.
double ladder_coupling_F(int n, double eta);

// Closed-form displacement matrix <m|D(alpha)|n> from the associated-Laguerre
// expression. Unitary by construction on the well-truncated subspace.
Eigen::MatrixXcd displacement_matrix(cplx alpha, const FockSpace& space);

// Numerical matrix exponential of (alpha a^dag - conj(alpha) a). Independent
// cross-check for displacement_matrix; used in tests and validation paths.
Eigen::MatrixXcd displacement_matrix_expm(cplx alpha, const FockSpace& space);

// Lowering operator a on the truncated basis: <n|a|n+1> = sqrt(n+1).
Eigen::MatrixXcd ladder_lowering(const FockSpace& space);

// All-orders lowering operator: single band with <n|A|n+1> = F(n). Its
// adjoint raises, A^dag|n> = F(n)|n+1>. The printed form A|n> = F(n)|n-1>
// pairs F with the wrong index and is not used (see ladder_coupling_F).
Eigen::MatrixXcd nonlinear_ladder(double eta, const FockSpace& space);

// Band vector b[n] = <n+1|B^dag|n> for the two ladder conventions.
Eigen::VectorXd ladder_band(const FockSpace& space);                  // sqrt(n+1)
Eigen::VectorXd nonlinear_ladder_band(double eta, const FockSpace& space);  // F(n)

// (|+>_x (x) |alpha> + |->_x (x) |-alpha>) / sqrt(2), tagged x basis.
HybridState ideal_cat(cplx alpha, const FockSpace& space);

}  // namespace qlrs
