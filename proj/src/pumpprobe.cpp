#include "qlrs/pumpprobe.hpp"

#include <cmath>
#include <stdexcept>

#include "qlrs/catgen.hpp"
#include "qlrs/optimizer.hpp"
#include "qlrs/recoil.hpp"

namespace qlrs {

double bright_population(double delay, const IvrModel& model) {
  if (!(model.tau1 > 0.0)) throw std::invalid_argument("tau1 must be > 0");
  if (delay < 0.0) throw std::invalid_argument("delay must be >= 0");
  return std::exp(-delay / model.tau1);
}

double two_photon_efficiency(const IonCrystal& crystal, const VibrationalMode& mode,
                             double heating_rate, const ProtocolSettings& settings) {
  OptimizationProblem problem;
  problem.crystal = crystal;
  problem.probe_wavenumber_cm1 = mode.frequency_cm1;
  problem.heating_rate = heating_rate;
  problem.photon_count = 2;
  problem.settings = settings;
  return optimize_angle(problem).efficiency;
}

SweepTable pump_probe_curve(const IvrModel& model, const IonCrystal& crystal,
                            double heating_rate, const std::vector<double>& delays,
                            const ProtocolSettings& settings) {
  const double p2 = two_photon_efficiency(crystal, model.bright_mode, heating_rate, settings);

  SweepTable table;
  table.columns = {"delay_s", "probability"};
  for (double delay : delays) {
    const double p = (1.0 - bright_population(delay, model)) * p2;
    table.rows.push_back({SweepTable::Cell(delay), SweepTable::Cell(p)});
  }
  table.add_metadata("molecule", crystal.molecule.name);
  table.add_metadata("mode", model.bright_mode.label);
  table.add_metadata("ion", crystal.ion.name);
  table.add_metadata("tau1_s", model.tau1);
  table.add_metadata("heating_rate_quanta_per_s", heating_rate);
  table.add_metadata("two_photon_efficiency", p2);
  return table;
}

PumpProbeMixture simulate_pump_probe_state(const HybridState& cat, double eta,
                                           double c0_sq) {
  if (c0_sq < 0.0 || c0_sq > 1.0) throw std::invalid_argument("c0^2 must be in [0, 1]");

  const int N = cat.fock_dim();
  const FockSpace space(N);

  // Read the cat size off the state itself: alpha^2 = <n> for an ideal cat.
  const double alpha = std::sqrt(std::max(0.0, cat.mean_n()));

  CatGenResult gen;
  gen.method = CatGenMethod::ld_analytic;
  gen.achieved_alpha = alpha;
  gen.state = cat.to_basis(SpinBasis::x);

  PumpProbeMixture mixture;
  mixture.detection_probability = 0.0;

  // Cancelled branch: pump D(i eta) then probe D(-i eta) is the identity.
  if (c0_sq > 0.0) {
    const double p = simulate_protocol(gen, {eta, two_pi / 4.0, 0}).spin_flip_probability;
    mixture.detection_probability += c0_sq * p;
    mixture.branches.emplace_back(c0_sq, *gen.state);
  }
  // Coherently added branch: both kicks in phase, D(2 i eta).
  if (c0_sq < 1.0) {
    const RecoilEvent doubled{eta, two_pi / 4.0, 2};
    const double p = simulate_protocol(gen, doubled).spin_flip_probability;
    mixture.detection_probability += (1.0 - c0_sq) * p;
    mixture.branches.emplace_back(1.0 - c0_sq, apply_recoil(*gen.state, doubled));
  }
  return mixture;
}

}  // namespace qlrs
