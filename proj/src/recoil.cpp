#include "qlrs/recoil.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "qlrs/optimizer.hpp"

namespace qlrs {

DetectionOutcome DetectionOutcome::from_phase(double theta_g, double contrast) {
  if (contrast < 0.0 || contrast > 1.0) {
    throw std::invalid_argument("contrast must be in [0, 1]");
  }
  DetectionOutcome out;
  out.geometric_phase = theta_g;
  out.contrast = contrast;
  out.spin_flip_probability = 0.5 * (1.0 - contrast * std::cos(2.0 * theta_g));
  out.background = 0.5 * (1.0 - contrast);
  return out;
}

DetectionOutcome DetectionOutcome::from_probability(double p, double contrast) {
  if (contrast < 0.0 || contrast > 1.0) {
    throw std::invalid_argument("contrast must be in [0, 1]");
  }
  DetectionOutcome out;
  out.spin_flip_probability = p;
  out.contrast = contrast;
  out.background = 0.5 * (1.0 - contrast);
  // invert p = (1 - C cos 2 theta)/2 on the principal branch
  const double c = (contrast > 0.0)
                       ? std::clamp((1.0 - 2.0 * p) / contrast, -1.0, 1.0)
                       : 1.0;
  out.geometric_phase = 0.5 * std::acos(c);
  return out;
}

double geometric_phase(double alpha, double eta, double scatter_phase) {
  return 2.0 * alpha * eta * std::sin(scatter_phase);
}

DetectionOutcome detect_probability(double alpha, double eta, double scatter_phase,
                                    double contrast) {
  return DetectionOutcome::from_phase(geometric_phase(alpha, eta, scatter_phase), contrast);
}

namespace {

HybridState displace_hybrid(const HybridState& state, cplx delta, double tail_threshold) {
  const int N = state.fock_dim();
  const FockSpace space(N);
  const Eigen::MatrixXcd D = displacement_matrix(delta, space);
  Eigen::VectorXcd v(2 * N);
  v.head(N) = D * state.amps().head(N);
  v.tail(N) = D * state.amps().tail(N);
  const double tol = std::max(1e-9, 2.0 * std::abs(state.norm() - 1.0));
  HybridState out(std::move(v), state.basis(), false, tol);
  if (!out.truncation_valid(tail_threshold)) {
    throw TruncationOverflowError("displacement pushed population into the basis tail");
  }
  return out;
}

}  // namespace

HybridState apply_recoil(const HybridState& state, const RecoilEvent& event,
                         double tail_threshold) {
  if (event.photon_count < 0) throw std::invalid_argument("photon_count must be >= 0");
  if (event.photon_count == 0) return state;
  const cplx delta =
      double(event.photon_count) * event.eta * std::polar(1.0, event.scatter_phase);
  return displace_hybrid(state, delta, tail_threshold);
}

DetectionOutcome simulate_protocol(const CatGenResult& gen, const RecoilEvent& event) {
  if (!gen.state.has_value()) {
    throw std::invalid_argument("simulate_protocol needs a generation result with a state");
  }
  const HybridState& initial = *gen.state;
  const int N = initial.fock_dim();
  const FockSpace space(N);

  // The scatter phase is defined relative to the cat's displacement axis;
  // analytic cats lie on the real axis (cat_axis = 1).
  const cplx delta = double(event.photon_count) * event.eta *
                     std::polar(1.0, event.scatter_phase) * gen.cat_axis;

  HybridState recoiled =
      (event.photon_count == 0) ? initial : displace_hybrid(initial, delta, 1e-6);

  HybridState analyzed = [&]() -> HybridState {
    if (gen.method == CatGenMethod::full_dynamics) {
      // adjoint of the generation: integrate backward under the same drive
      std::unique_ptr<Hamiltonian> h;
      if (gen.rwa) {
        h = std::make_unique<BichromaticRwaHamiltonian>(
            hamiltonian_bichromatic_rwa_all_orders(gen.rabi, gen.eta_control, space));
      } else {
        const std::vector<DriveTone> tones = {{gen.rabi, +gen.trap_omega, 0.0},
                                              {gen.rabi, -gen.trap_omega, 0.0}};
        h = std::make_unique<DriveHamiltonian>(
            hamiltonian_all_orders(tones, gen.eta_control, gen.trap_omega, space));
      }
      return propagate(*h, recoiled.to_basis(SpinBasis::z), gen.duration, 0.0, gen.config);
    }
    // analytic inverse: undo the +/- alpha branch displacements in the x basis
    const HybridState x = recoiled.to_basis(SpinBasis::x);
    const double alpha = gen.achieved_alpha;
    const Eigen::MatrixXcd Dminus = displacement_matrix(cplx(-alpha, 0.0), space);
    const Eigen::MatrixXcd Dplus = displacement_matrix(cplx(+alpha, 0.0), space);
    Eigen::VectorXcd v(2 * N);
    v.head(N) = Dminus * x.amps().head(N);
    v.tail(N) = Dplus * x.amps().tail(N);
    const double tol = std::max(1e-9, 2.0 * std::abs(x.norm() - 1.0));
    return HybridState(std::move(v), SpinBasis::x, false, tol);
  }();

  const HybridState z = analyzed.to_basis(SpinBasis::z);
  const double p_flip = z.spin_populations().second;
  return DetectionOutcome::from_probability(p_flip, 1.0);
}

std::vector<double> ModePopulations::poisson(double mean_photons, double tail_eps) {
  if (mean_photons < 0.0) throw std::invalid_argument("mean photon number must be >= 0");
  std::vector<double> p;
  double term = std::exp(-mean_photons);
  p.push_back(term);
  int k = 0;
  while (term > tail_eps || k < 2) {
    ++k;
    term *= mean_photons / k;
    p.push_back(term);
    if (k > 4096) break;
  }
  return p;
}

std::vector<double> ModePopulations::coherent(cplx beta, double tail_eps) {
  return poisson(std::norm(beta), tail_eps);
}

std::vector<double> ModePopulations::two_level(double excitation_probability) {
  if (excitation_probability < 0.0 || excitation_probability > 1.0) {
    throw std::invalid_argument("excitation probability must be in [0, 1]");
  }
  return {1.0 - excitation_probability, excitation_probability};
}

void ModePopulations::validate() const {
  for (const auto& dist : modes) {
    double sum = 0.0;
    for (double p : dist) {
      if (p < -1e-12) throw std::invalid_argument("negative photon probability");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw std::invalid_argument("mode photon distribution must sum to 1 within 1e-9");
    }
  }
}

std::vector<double> ModePopulations::total_distribution() const {
  validate();
  std::vector<double> total = {1.0};
  for (const auto& dist : modes) {
    std::vector<double> next(total.size() + dist.size() - 1, 0.0);
    for (size_t i = 0; i < total.size(); ++i) {
      for (size_t k = 0; k < dist.size(); ++k) next[i + k] += total[i] * dist[k];
    }
    total.swap(next);
  }
  return total;
}

Eigen::MatrixXcd traced_motional_state(const ModePopulations& populations, double eta,
                                       cplx cat_alpha, const FockSpace& space) {
  const std::vector<double> total = populations.total_distribution();
  const HybridState cat = ideal_cat(cat_alpha, space);
  const int N = space.dim;

  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(2 * N, 2 * N);
  for (size_t k = 0; k < total.size(); ++k) {
    if (total[k] < 1e-15) continue;
    const cplx delta = cplx(0.0, eta * double(k));
    space.require_admits(std::abs(cat_alpha) + std::abs(delta));
    const HybridState displaced =
        (k == 0) ? cat : displace_hybrid(cat, delta, 1e-6);
    rho.noalias() += total[k] * displaced.amps() * displaced.amps().adjoint();
  }
  return rho;
}

MultimodeDetection multimode_detection(const ModePopulations& populations, double eta,
                                       double cat_alpha, double contrast) {
  const std::vector<double> total = populations.total_distribution();
  MultimodeDetection out{0.0, 0.0};
  for (size_t k = 0; k < total.size(); ++k) {
    const double theta_g = 2.0 * cat_alpha * eta * double(k);  // phi_sc = pi/2
    out.exact += total[k] * 0.5 * (1.0 - contrast * std::cos(2.0 * theta_g));
  }
  double amplitude_sum = 0.0;
  for (const auto& dist : populations.modes) {
    for (size_t k = 0; k < dist.size(); ++k) {
      amplitude_sum += double(k) * std::sqrt(std::max(0.0, dist[k]));
    }
  }
  const double s = std::sin(2.0 * cat_alpha * eta * amplitude_sum);
  out.as_printed = s * s;
  return out;
}

double pulse_excitation(const VibrationalMode& mode, double pulse_center_cm1,
                        double pulse_duration_fwhm_s, double pulse_area,
                        double ref_intensity) {
  if (!(pulse_duration_fwhm_s > 0.0)) {
    throw std::invalid_argument("pulse duration must be > 0");
  }
  const double sigma_t = pulse_duration_fwhm_s / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  const double detuning = two_pi * constants::c_light * 100.0 *
                          (mode.frequency_cm1 - pulse_center_cm1);
  const double ratio = (ref_intensity > 0.0)
                           ? std::sqrt(mode.ir_intensity_km_mol / ref_intensity)
                           : 1.0;
  const double d2s2 = detuning * detuning * sigma_t * sigma_t;
  if (mode.model == ModeModel::two_level) {
    const double half_pi = two_pi / 4.0;
    const double amp = pulse_area * ratio * std::exp(-0.25 * d2s2);
    const double p = std::sin(half_pi * amp);
    return std::clamp(p * p, 0.0, 1.0);
  }
  return pulse_area * ratio * std::exp(-0.5 * d2s2);
}

SweepTable spectrum_scan(const IonCrystal& crystal, const ScanRange& range,
                         const PulseParams& pulse, double heating_rate,
                         const ProtocolSettings& settings) {
  if (!(range.from_cm1 < range.to_cm1) || !(range.step_cm1 > 0.0)) {
    throw std::invalid_argument("scan range needs from < to and step > 0");
  }
  const double ref_intensity = crystal.molecule.max_ir_intensity();

  SweepTable table;
  table.columns = {"wavenumber_cm1", "spin_flip_probability"};
  for (const auto& m : crystal.molecule.modes) table.columns.push_back("beta_" + m.label);

  const int points =
      static_cast<int>(std::floor((range.to_cm1 - range.from_cm1) / range.step_cm1 + 1e-9)) +
      1;
  for (int i = 0; i < points; ++i) {
    const double nu = range.from_cm1 + i * range.step_cm1;
    OptimizationProblem problem;
    problem.crystal = crystal;
    problem.probe_wavenumber_cm1 = nu;
    problem.heating_rate = heating_rate;
    problem.photon_count = 1;
    problem.settings = settings;
    const Optimum opt = optimize_angle(problem);
    const double eta_m = eta_probe(crystal, nu, 0.0);

    ModePopulations populations;
    std::vector<double> betas;
    for (const auto& m : crystal.molecule.modes) {
      const double value =
          (ref_intensity > 0.0)
              ? pulse_excitation(m, nu, pulse.fwhm_s, pulse.area, ref_intensity)
              : 0.0;  // no catalog intensities: nothing couples to the pulse
      betas.push_back(value);
      if (m.model == ModeModel::two_level) {
        populations.modes.push_back(ModePopulations::two_level(value));
      } else {
        populations.modes.push_back(ModePopulations::coherent(value));
      }
    }
    const double p =
        multimode_detection(populations, eta_m, opt.alpha_star, opt.contrast).exact;

    std::vector<SweepTable::Cell> row;
    row.emplace_back(nu);
    row.emplace_back(p);
    for (double b : betas) row.emplace_back(b);
    table.rows.push_back(std::move(row));
  }

  table.add_metadata("molecule", crystal.molecule.name);
  table.add_metadata("ion", crystal.ion.name);
  table.add_metadata("trap_frequency_khz", crystal.trap_frequency / (two_pi * 1e3));
  table.add_metadata("heating_rate_quanta_per_s", heating_rate);
  table.add_metadata("pulse_fwhm_fs", pulse.fwhm_s * 1e15);
  table.add_metadata("pulse_area", pulse.area);
  table.add_metadata("rabi_cap_khz", settings.rabi_cap / (two_pi * 1e3));
  return table;
}

}  // namespace qlrs
