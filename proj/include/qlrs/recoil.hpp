#pragma once

#include <vector>

#include "qlrs/catgen.hpp"
#include "qlrs/fock.hpp"
#include "qlrs/molecule.hpp"
#include "qlrs/protocol.hpp"
#include "qlrs/sweep_table.hpp"

namespace qlrs {

// One photon-recoil kick on the motional mode.
struct RecoilEvent {
  double eta;            // Lamb-Dicke parameter of the absorbed light
  double scatter_phase;  // phi_sc, relative to the cat's sensitive axis
  int photon_count = 1;
};

struct DetectionOutcome {
  double spin_flip_probability;  // (1 - C cos 2 theta_g) / 2, exactly
  double geometric_phase;
  double contrast;
  double background;  // (1 - C) / 2

  static DetectionOutcome from_phase(double theta_g, double contrast);
  static DetectionOutcome from_probability(double p, double contrast);
};

// theta_g = 2 alpha eta sin(phi_sc).
double geometric_phase(double alpha, double eta, double scatter_phase);

// Closed-form readout probability for a recoil on an ideal cat.
DetectionOutcome detect_probability(double alpha, double eta, double scatter_phase,
                                    double contrast);

// Displaces the motional part by photon_count * eta * e^{i phi_sc}; the spin
// is untouched. The molecular excitation is tracked only via photon_count.
HybridState apply_recoil(const HybridState& state, const RecoilEvent& event,
                         double tail_threshold = 1e-7);

// Full state-vector protocol: recoil, inverse of the generation (analytic for
// ideal cats, time-reversed propagation for full dynamics), then an x-basis
// Ramsey analyzer. Returns the measured flip probability and extracted phase.
DetectionOutcome simulate_protocol(const CatGenResult& gen, const RecoilEvent& event);

// Photon-number distributions, one per vibrational mode.
struct ModePopulations {
  std::vector<std::vector<double>> modes;

  static std::vector<double> poisson(double mean_photons, double tail_eps = 1e-16);
  static std::vector<double> coherent(cplx beta, double tail_eps = 1e-16);
  static std::vector<double> two_level(double excitation_probability);

  void validate() const;  // each distribution sums to 1 within 1e-9
  // Distribution of the total absorbed photon number (modes independent).
  std::vector<double> total_distribution() const;
};

// Mixed motional+spin state after tracing out the vibrations: a mixture of
// the cat displaced by +i eta K over the total photon number K.
Eigen::MatrixXcd traced_motional_state(const ModePopulations& populations, double eta,
                                       cplx cat_alpha, const FockSpace& space);

struct MultimodeDetection {
  double exact;       // mixture average of the Ramsey probability at phi_sc = pi/2
  double as_printed;  // amplitude-weighted closed form, kept for comparison
};

MultimodeDetection multimode_detection(const ModePopulations& populations, double eta,
                                       double cat_alpha, double contrast);

// Excitation of one mode by a Gaussian pulse: the returned value is the
// coherent amplitude beta (harmonic model) or excitation probability
// (two-level model). ref_intensity <= 0 treats the mode as unit strength.
double pulse_excitation(const VibrationalMode& mode, double pulse_center_cm1,
                        double pulse_duration_fwhm_s, double pulse_area,
                        double ref_intensity = 0.0);

struct ScanRange {
  double from_cm1;
  double to_cm1;
  double step_cm1;
};

struct PulseParams {
  double fwhm_s = 200e-15;
  double area = 1.0;
};

// Absorption spectrum: per scan point, excite every catalog mode, optimize
// the protocol for the local probe wavenumber, and evaluate the expected
// spin-flip probability.
SweepTable spectrum_scan(const IonCrystal& crystal, const ScanRange& range,
                         const PulseParams& pulse, double heating_rate,
                         const ProtocolSettings& settings = {});

}  // namespace qlrs
