#pragma once

#include <limits>
#include <memory>
#include <vector>

#include "qlrs/fock.hpp"

namespace qlrs {

// One laser tone addressing the two-level transition.
struct DriveTone {
  double rabi;          // Omega, rad/s, >= 0
  double detuning;      // Delta = w_l - w_a, rad/s
  double phase = 0.0;   // rad
};

struct PropagatorConfig {
  double max_step = std::numeric_limits<double>::infinity();  // s
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double norm_drift_limit = 1e-9;
  double tail_threshold = 1e-7;
};

struct PropagationStats {
  long steps_accepted = 0;
  long steps_rejected = 0;
  double max_norm_drift = 0.0;
  double error_estimate = 0.0;  // accumulated local error estimates
};

// Interaction-picture Hamiltonian on spin (x) Fock. apply() computes
// H(t)/hbar * psi, i.e. works in angular-frequency units throughout.
class Hamiltonian {
 public:
  virtual ~Hamiltonian() = default;
  virtual int fock_dim() const = 0;
  virtual void apply(double t, const Eigen::VectorXcd& psi, Eigen::VectorXcd& out) const = 0;
  // Fastest explicit oscillation in H(t), rad/s; 0 for time-independent terms.
  virtual double max_oscillation() const = 0;
};

// H(t)/hbar = sum_tones (Omega/2) e^{-i Delta t + i phi}
//             sigma_+ (x) (1 + i eta (B e^{-i w_t t} + B^dag e^{i w_t t})) + h.c.
// with B = a (Lamb-Dicke band sqrt(n+1)) or the all-orders ladder (band F(n)).
class DriveHamiltonian : public Hamiltonian {
 public:
  DriveHamiltonian(std::vector<DriveTone> tones, double eta, double trap_omega,
                   Eigen::VectorXd band);

  int fock_dim() const override { return static_cast<int>(band_.size()) + 1; }
  void apply(double t, const Eigen::VectorXcd& psi, Eigen::VectorXcd& out) const override;
  double max_oscillation() const override;

 private:
  std::vector<DriveTone> tones_;
  double eta_;
  double trap_omega_;
  Eigen::VectorXd band_;  // b[n] couples |n> <-> |n+1>
};

// Time-independent bichromatic RWA Hamiltonian
//   H/hbar = (eta Omega / 2) sigma_x (x) (B + B^dag).
class BichromaticRwaHamiltonian : public Hamiltonian {
 public:
  BichromaticRwaHamiltonian(double rabi, double eta, Eigen::VectorXd band);

  int fock_dim() const override { return static_cast<int>(band_.size()) + 1; }
  void apply(double t, const Eigen::VectorXcd& psi, Eigen::VectorXcd& out) const override;
  double max_oscillation() const override { return 0.0; }

 private:
  double coupling_;  // eta * Omega / 2
  Eigen::VectorXd band_;
};

// Constructors mirroring the model variants.
DriveHamiltonian hamiltonian_ld(const std::vector<DriveTone>& tones, double eta,
                                double trap_omega, const FockSpace& space);
DriveHamiltonian hamiltonian_all_orders(const std::vector<DriveTone>& tones, double eta,
                                        double trap_omega, const FockSpace& space);
BichromaticRwaHamiltonian hamiltonian_bichromatic_rwa(double rabi, double eta,
                                                      const FockSpace& space);
BichromaticRwaHamiltonian hamiltonian_bichromatic_rwa_all_orders(double rabi, double eta,
                                                                 const FockSpace& space);

// Solves i d|psi>/dt = (H/hbar)|psi> with an adaptive embedded Runge-Kutta
// pair (Dormand-Prince 5(4)). Integrates backward when t1 < t0. The state is
// never renormalized; norm drift beyond the configured limit raises
// NormDriftError, tail overflow raises TruncationOverflowError.
HybridState propagate(const Hamiltonian& h, const HybridState& state, double t0, double t1,
                      const PropagatorConfig& config = {}, PropagationStats* stats = nullptr);

// <psi| H(t)/hbar |psi>, real part (H is Hermitian).
double expectation(const Hamiltonian& h, double t, const HybridState& state);

}  // namespace qlrs
