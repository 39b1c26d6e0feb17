#pragma once

#include "qlrs/physics.hpp"

namespace qlrs {

// The quantity the optimizer maximizes and reports as "efficiency".
//   signal:           contrast-weighted signal C sin^2(theta_g), i.e. the
//                     Ramsey probability with its dephasing background removed
//   ramsey_probability: raw spin-flip probability (1 - C cos 2 theta_g)/2
enum class Objective { signal, ramsey_probability };

// How the cat generation duration entering the heating model is computed.
enum class DurationModel { ld_analytic, growth_ode };

struct ProtocolSettings {
  double rabi_cap = two_pi * 300e3;       // control-beam Rabi limit, rad/s
  Objective objective = Objective::signal;
  DurationModel duration_model = DurationModel::ld_analytic;
  // Double the heating exposure to cover the inverse mapping as well.
  bool roundtrip_heating = false;
};

}  // namespace qlrs
