#pragma once

#include <optional>
#include <vector>

#include "qlrs/dynamics.hpp"
#include "qlrs/fock.hpp"
#include "qlrs/physics.hpp"

namespace qlrs {

enum class CatGenMethod { ld_analytic, growth_ode, full_dynamics };

// Stop condition for a generation run.
struct CatGenTarget {
  enum class Kind { alpha, duration, saturate };
  Kind kind = Kind::alpha;
  double value = 0.0;

  static CatGenTarget alpha(double a) { return {Kind::alpha, a}; }
  static CatGenTarget duration(double t) { return {Kind::duration, t}; }
  static CatGenTarget saturate() { return {Kind::saturate, 0.0}; }
};

struct CatGenSpec {
  double rabi;               // Omega, rad/s; must respect rabi_cap
  double eta_control;        // Lamb-Dicke parameter of the control beam
  CatGenTarget target = CatGenTarget::alpha(1.0);
  FockSpace space{64};
  double trap_omega = two_pi * 500e3;  // tone detunings for full dynamics
  double rabi_cap = two_pi * 300e3;    // hardware limit on the drive
};

struct TrajectoryPoint {
  double t;
  double alpha;
};

struct CatGenResult {
  double achieved_alpha = 0.0;  // sqrt(<n>); for saturate runs the trajectory maximum
  double duration = 0.0;        // s
  double fidelity_vs_ideal = 1.0;
  std::vector<TrajectoryPoint> trajectory;
  CatGenMethod method = CatGenMethod::ld_analytic;

  // Explicit final state and the parameters needed to invert the generation.
  std::optional<HybridState> state;
  cplx cat_axis{1.0, 0.0};  // unit phase of the |+>_x branch displacement
  double rabi = 0.0;
  double eta_control = 0.0;
  double trap_omega = 0.0;
  bool rwa = false;
  PropagatorConfig config{};
};

struct FullDynamicsOptions {
  bool rwa = false;             // use the time-independent bichromatic RWA form
  double sample_interval = 0.0; // trajectory sampling; 0 chooses automatically
};

// alpha(t) = eta Omega t / 2 with the state taken as the ideal cat.
CatGenResult generate_cat_ld(const CatGenSpec& spec);

// Semi-analytic surrogate: d(alpha)/dt = (eta Omega / 2) F(n) / sqrt(n+1)
// with n = floor(alpha^2), integrated exactly stair by stair. Reduces to the
// Lamb-Dicke slope as eta -> 0 and stalls at the Laguerre zero.
CatGenResult generate_cat_growth_ode(const CatGenSpec& spec);

// State-vector propagation of |g>|0> under the all-orders bichromatic drive
// (tones at Delta = +/- w_t), or its RWA form when options.rwa is set.
CatGenResult generate_cat_full(const CatGenSpec& spec, const PropagatorConfig& config = {},
                               const FullDynamicsOptions& options = {});

// Largest reachable displacement sqrt(n*) with n* the first n for which
// L_n^1(eta^2) <= 0.
double max_alpha(double eta);

// Duration the growth surrogate needs to reach target_alpha.
double growth_ode_duration(double target_alpha, double eta, double rabi);

// <phi^2> = 8 R alpha^2 (2 tau / 3) for heating rate R (quanta/s).
double heating_phase_variance(double rate, double alpha, double duration);

// Ramsey contrast C = exp(-<phi^2>/2).
double coherence_factor(double phase_variance);

}  // namespace qlrs
