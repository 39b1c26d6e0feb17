#include <doctest.h>

#include <cmath>

#include "qlrs/physics.hpp"

using namespace qlrs;

TEST_SUITE_BEGIN("physics");

// Reference values computed with an arbitrary-precision evaluation of the
// same formulas (40 decimal digits), frozen here.
namespace {
constexpr double k_3259_cm1 = 2047690.0916098272;       // 2 pi * 100 * 3259
constexpr double k_729_nm = 8618909.8863917510;         // 2 pi / 729 nm
constexpr double x0_91_da = 1.0539084857489212e-8;      // at 2 pi * 500 kHz
constexpr double eta_c3hn_nu1 = 0.021580779637315827;
constexpr double eta_c3hn_control = 0.090835422671735366;
constexpr double eta_nh3_probe = 0.029267514565257707;
}  // namespace

TEST_CASE("wavenumber to wavevector") {
  CHECK(wavenumber_to_wavevector(3259.0) == doctest::Approx(k_3259_cm1).epsilon(1e-12));
  CHECK(wavenumber_to_wavevector(0.0) == 0.0);
  CHECK_THROWS_AS(wavenumber_to_wavevector(-1.0), std::invalid_argument);
  // wavelength form of the same conversion
  const double k = Frequency::from_wavelength_m(729e-9).rad_per_s() / constants::c_light;
  CHECK(k == doctest::Approx(k_729_nm).epsilon(1e-12));
}

TEST_CASE("ground state size and Lamb-Dicke values") {
  const double m91 = 91.0 * constants::dalton;
  const double wt = two_pi * 500e3;
  CHECK(ground_state_size(m91, wt) == doctest::Approx(x0_91_da).epsilon(1e-12));

  CHECK(lamb_dicke(k_3259_cm1, m91, wt, 0.0) ==
        doctest::Approx(eta_c3hn_nu1).epsilon(1e-12));
  CHECK(lamb_dicke(k_729_nm, m91, wt, 0.0) ==
        doctest::Approx(eta_c3hn_control).epsilon(1e-12));

  const double m57 = 57.0 * constants::dalton;
  CHECK(lamb_dicke(wavenumber_to_wavevector(3498.0), m57, wt, 0.0) ==
        doctest::Approx(eta_nh3_probe).epsilon(1e-12));

  // projection vanishes perpendicular to the mode
  CHECK(std::abs(lamb_dicke(k_729_nm, m91, wt, two_pi / 4.0)) < 1e-12);

  CHECK_THROWS_AS(lamb_dicke(1.0, -1.0, wt), std::invalid_argument);
  CHECK_THROWS_AS(lamb_dicke(1.0, m91, 0.0), std::invalid_argument);
}

TEST_CASE("Lamb-Dicke scaling in trap frequency is exactly sqrt") {
  const double m = 40.0 * constants::dalton;
  const double w = two_pi * 350e3;
  CHECK(lamb_dicke(k_729_nm, m, 4.0 * w) == lamb_dicke(k_729_nm, m, w) / 2.0);
}

TEST_CASE("Lamb-Dicke angle dependence: even and monotone on [0, pi/2]") {
  const double m = 91.0 * constants::dalton;
  const double w = two_pi * 500e3;
  double prev = lamb_dicke(k_729_nm, m, w, 0.0);
  for (int i = 1; i <= 40; ++i) {
    const double theta = (two_pi / 4.0) * i / 40.0;
    const double e = lamb_dicke(k_729_nm, m, w, theta);
    CHECK(lamb_dicke(k_729_nm, m, w, -theta) == doctest::Approx(e).epsilon(1e-14));
    CHECK(e < prev);
    prev = e;
  }
}

TEST_CASE("frequency unit round trips") {
  for (double nu : {1.0, 911.0, 1890.0, 3259.0, 3498.0, 15000.0}) {
    const Frequency f = Frequency::from_wavenumber_cm1(nu);
    CHECK(f.wavenumber_cm1() == doctest::Approx(nu).epsilon(1e-12));
  }
  const Frequency f = Frequency::from_wavelength_m(729e-9);
  CHECK(f.wavelength_m() == doctest::Approx(729e-9).epsilon(1e-12));
  CHECK(Frequency::from_hz(500e3).rad_per_s() == doctest::Approx(two_pi * 500e3));
  CHECK_THROWS_AS(Frequency::from_wavenumber_cm1(-2.0), std::invalid_argument);
}

TEST_SUITE_END();
