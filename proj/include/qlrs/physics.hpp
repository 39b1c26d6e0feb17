#pragma once

#include <cmath>

namespace qlrs {

// CODATA values. Internal unit system is SI throughout the library;
// catalog-facing I/O uses spectroscopy units (cm^-1, Dalton, nm).
namespace constants {
inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double c_light = 2.99792458e8;       // m / s
inline constexpr double dalton = 1.66053906660e-27;   // kg
}  // namespace constants

inline constexpr double two_pi = 6.283185307179586476925286766559;

// Angular frequency with constructors from the unit systems that appear in
// vibrational catalogs. Canonical value is rad/s.
class Frequency {
 public:
  Frequency() = default;

  static Frequency from_rad_per_s(double w);
  static Frequency from_hz(double hz);
  static Frequency from_wavenumber_cm1(double nu_tilde);
  static Frequency from_wavelength_m(double lambda);

  double rad_per_s() const { return value_; }
  double hz() const { return value_ / two_pi; }
  double wavenumber_cm1() const;
  double wavelength_m() const;

 private:
  explicit Frequency(double w) : value_(w) {}
  double value_ = 0.0;  // rad/s, >= 0
};

// k = 2*pi * 100 * nu_tilde, with nu_tilde in cm^-1. Result in m^-1.
double wavenumber_to_wavevector(double nu_tilde_cm1);

// Ground-state wavepacket size sqrt(hbar / (2 m w_t)) in meters.
double ground_state_size(double total_mass_kg, double trap_omega);

// eta = k * sqrt(hbar / (2 m w_t)) * cos(theta).
// `total_mass_kg` is the mass of the full ion crystal.
double lamb_dicke(double wavevector, double total_mass_kg, double trap_omega,
                  double theta = 0.0);

}  // namespace qlrs
