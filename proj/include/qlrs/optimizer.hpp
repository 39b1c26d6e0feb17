#pragma once

#include <vector>

#include "qlrs/molecule.hpp"
#include "qlrs/protocol.hpp"
#include "qlrs/sweep_table.hpp"

namespace qlrs {

struct OptimizationProblem {
  IonCrystal crystal;
  double probe_wavenumber_cm1 = 0.0;
  double heating_rate = 0.0;  // quanta/s
  int photon_count = 1;       // 1 or 2
  ProtocolSettings settings{};
};

struct EfficiencyBreakdown {
  double efficiency;          // per settings.objective
  double signal;              // C sin^2(theta_g)
  double ramsey_probability;  // (1 - C cos 2 theta_g) / 2
  double contrast;
  double background;
  double duration;
  double theta_g;
  double eta_control;
  double eta_probe;
};

// Composition of the protocol pipeline at one (angle, displacement) point.
EfficiencyBreakdown efficiency_at(const OptimizationProblem& problem, double theta,
                                  double alpha);

struct Optimum {
  double theta_star;   // rad
  double alpha_star;
  double duration;     // s
  double efficiency;
  double background;
  double contrast;
  double ramsey_probability;
};

// Coarse 1-degree grid over theta in [0, 89] deg, an inner maximization over
// alpha in (0, max_alpha], then golden-section refinement over theta.
// Deterministic: identical inputs give identical outputs.
Optimum optimize_angle(const OptimizationProblem& problem);

// Reference detection efficiencies for the built-in species (percent),
// indexed per row of reference_rows(); heating rates 10, 1, 0.1 quanta/s.
struct ReferenceRow {
  const char* molecule;
  const char* mode;
  const char* ion;
  double efficiency_percent[3];
};
const std::vector<ReferenceRow>& reference_single_photon();  // one recoil
const std::vector<ReferenceRow>& reference_two_photon();     // pump-probe recoil

// Efficiency grid over the built-in species vs heating rate, with deviation
// columns against the reference values when photon_count selects a table.
SweepTable reproduce_tables(const std::vector<double>& heating_rates, int photon_count,
                            const ProtocolSettings& settings = {});

}  // namespace qlrs
