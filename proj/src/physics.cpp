#include "qlrs/physics.hpp"

#include <stdexcept>
#include <string>

namespace qlrs {

namespace {
void require_nonnegative(double v, const char* what) {
  if (!(v >= 0.0)) {
    throw std::invalid_argument(std::string(what) + " must be >= 0");
  }
}
void require_positive(double v, const char* what) {
  if (!(v > 0.0)) {
    throw std::invalid_argument(std::string(what) + " must be > 0");
  }
}
}  // namespace

Frequency Frequency::from_rad_per_s(double w) {
  require_nonnegative(w, "frequency");
  return Frequency(w);
}

Frequency Frequency::from_hz(double hz) {
  require_nonnegative(hz, "frequency");
  return Frequency(two_pi * hz);
}

Frequency Frequency::from_wavenumber_cm1(double nu_tilde) {
  require_nonnegative(nu_tilde, "wavenumber");
  return Frequency(two_pi * constants::c_light * 100.0 * nu_tilde);
}

Frequency Frequency::from_wavelength_m(double lambda) {
  require_positive(lambda, "wavelength");
  return Frequency(two_pi * constants::c_light / lambda);
}

double Frequency::wavenumber_cm1() const {
  return value_ / (two_pi * constants::c_light * 100.0);
}

double Frequency::wavelength_m() const {
  if (value_ == 0.0) {
    throw std::domain_error("wavelength undefined for zero frequency");
  }
  return two_pi * constants::c_light / value_;
}

double wavenumber_to_wavevector(double nu_tilde_cm1) {
  require_nonnegative(nu_tilde_cm1, "wavenumber");
  return two_pi * 100.0 * nu_tilde_cm1;
}

double ground_state_size(double total_mass_kg, double trap_omega) {
  require_positive(total_mass_kg, "mass");
  require_positive(trap_omega, "trap frequency");
  return std::sqrt(constants::hbar / (2.0 * total_mass_kg * trap_omega));
}

double lamb_dicke(double wavevector, double total_mass_kg, double trap_omega,
                  double theta) {
  require_nonnegative(wavevector, "wavevector");
  return wavevector * ground_state_size(total_mass_kg, trap_omega) * std::cos(theta);
}

}  // namespace qlrs
