#pragma once

#include <vector>

#include "qlrs/fock.hpp"
#include "qlrs/molecule.hpp"
#include "qlrs/protocol.hpp"
#include "qlrs/sweep_table.hpp"

namespace qlrs {

// Irreversible redistribution of the bright-mode population into dark modes.
struct IvrModel {
  double tau1;  // bright-state lifetime, s, > 0
  VibrationalMode bright_mode;
};

// Bright-state survival exp(-delay / tau1).
double bright_population(double delay, const IvrModel& model);

// Detection efficiency when pump and probe kicks add coherently (D(2 i eta)):
// the optimizer re-runs with the geometric phase doubled.
double two_photon_efficiency(const IonCrystal& crystal, const VibrationalMode& mode,
                             double heating_rate, const ProtocolSettings& settings = {});

// p(delay) = (1 - exp(-delay/tau1)) * p_2photon per delay value.
SweepTable pump_probe_curve(const IvrModel& model, const IonCrystal& crystal,
                            double heating_rate, const std::vector<double>& delays,
                            const ProtocolSettings& settings = {});

// Classical mixture after the probe pulse: weight c0^2 on the undisplaced cat
// (kicks cancel), weight 1 - c0^2 on the doubly displaced cat.
struct PumpProbeMixture {
  std::vector<std::pair<double, HybridState>> branches;  // (weight, state)
  double detection_probability;
};

PumpProbeMixture simulate_pump_probe_state(const HybridState& cat, double eta, double c0_sq);

}  // namespace qlrs
