#include <doctest.h>

#include <cmath>

#include "qlrs/catgen.hpp"
#include "qlrs/dynamics.hpp"

using namespace qlrs;

TEST_SUITE_BEGIN("dynamics");

namespace {
const double wt = two_pi * 500e3;

HybridState ground(int dim) { return HybridState::ground(FockSpace(dim)); }
}  // namespace

TEST_CASE("resonant carrier gives two-level Rabi flopping") {
  const double omega = two_pi * 50e3;
  const FockSpace space(8);
  const DriveHamiltonian h = hamiltonian_ld({{omega, 0.0, 0.0}}, 0.0, wt, space);
  for (double frac : {0.1, 0.25, 0.6, 1.0}) {
    const double t = frac * two_pi / omega;  // up to one full Rabi period
    const HybridState out = propagate(h, ground(8), 0.0, t);
    const double expected = std::pow(std::sin(0.5 * omega * t), 2);
    CHECK(out.spin_populations().second == doctest::Approx(expected).epsilon(1e-8));
  }
}

TEST_CASE("pi pulse transfers all population") {
  const double omega = two_pi * 50e3;
  const FockSpace space(8);
  const DriveHamiltonian h = hamiltonian_ld({{omega, 0.0, 0.0}}, 0.0, wt, space);
  const HybridState out = propagate(h, ground(8), 0.0, two_pi / (2.0 * omega));
  CHECK(out.spin_populations().second == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("zero Hamiltonian leaves the state unchanged") {
  const FockSpace space(8);
  const DriveHamiltonian h = hamiltonian_ld({}, 0.0, wt, space);
  const HybridState in = ground(8);
  const HybridState out = propagate(h, in, 0.0, 1e-4);
  CHECK(out.fidelity(in) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("red sideband flops |g,1> <-> |e,0> at eta Omega") {
  // Drive well below the trap frequency so the off-resonant carrier only
  // contributes a small AC-Stark shift.
  const double omega = two_pi * 20e3;
  const double eta = 0.1;
  const FockSpace space(12);
  const DriveHamiltonian h = hamiltonian_ld({{omega, -wt, 0.0}}, eta, wt, space);

  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(24);
  v[1] = 1.0;  // |g, n=1>
  const HybridState start(v, SpinBasis::z, false);

  // locate the first upward crossing of p_e = 1/2: at g t = pi/2
  const double g_expected = eta * omega;
  const double t_half_expected = (two_pi / 4.0) / g_expected;
  double t_lo = 0.0, p_lo = 0.0;
  double g_fit = 0.0;
  HybridState state = start;
  const int samples = 40;
  for (int i = 1; i <= samples; ++i) {
    const double t1 = 1.4 * t_half_expected * i / samples;
    const double t0 = 1.4 * t_half_expected * (i - 1) / samples;
    state = propagate(h, state, t0, t1);
    const double p = state.spin_populations().second;
    if (p >= 0.5 && p_lo < 0.5) {
      const double t_cross = t_lo + (0.5 - p_lo) / (p - p_lo) * (t1 - t_lo);
      g_fit = (two_pi / 4.0) / t_cross;
      break;
    }
    t_lo = t1;
    p_lo = p;
  }
  REQUIRE(g_fit > 0.0);
  CHECK(std::abs(g_fit - g_expected) / g_expected < 0.02);
}

TEST_CASE("symmetric detuned tone pair at eta=0 stays bounded by (Omega/w_t)^2") {
  const double omega = 0.3 * wt;
  const FockSpace space(8);
  const DriveHamiltonian h = hamiltonian_ld({{omega, +wt, 0.0}, {omega, -wt, 0.0}}, 0.0,
                                            wt, space);
  HybridState state = ground(8);
  const double bound = (omega / wt) * (omega / wt);
  double t = 0.0;
  for (int i = 0; i < 24; ++i) {
    const double t1 = t + (two_pi / wt) / 8.0;
    state = propagate(h, state, t, t1);
    t = t1;
    CHECK(state.spin_populations().second < bound);
  }
}

TEST_CASE("all-orders Hamiltonian matches Lamb-Dicke form on low-n states") {
  const double eta = 0.01;
  const double omega = two_pi * 50e3;
  const FockSpace space(48);

  // (a) displacement comparison under the RWA bichromatic forms up to alpha=0.5
  const double t_disp = 2.0 * 0.5 / (eta * omega);
  const BichromaticRwaHamiltonian h_ld = hamiltonian_bichromatic_rwa(omega, eta, space);
  const BichromaticRwaHamiltonian h_all =
      hamiltonian_bichromatic_rwa_all_orders(omega, eta, space);
  const HybridState out_ld = propagate(h_ld, ground(48), 0.0, t_disp);
  const HybridState out_all = propagate(h_all, ground(48), 0.0, t_disp);
  CHECK(out_all.fidelity(out_ld) >= 1.0 - 1e-6);

  // (b) the full two-tone drives agree over ten trap periods
  const std::vector<DriveTone> tones = {{omega, +wt, 0.0}, {omega, -wt, 0.0}};
  const DriveHamiltonian f_ld = hamiltonian_ld(tones, eta, wt, space);
  const DriveHamiltonian f_all = hamiltonian_all_orders(tones, eta, wt, space);
  const double t10 = 10.0 * two_pi / wt;
  const HybridState g_ld = propagate(f_ld, ground(48), 0.0, t10);
  const HybridState g_all = propagate(f_all, ground(48), 0.0, t10);
  CHECK(g_all.fidelity(g_ld) >= 1.0 - 1e-6);

  // eta = 0 reduces both to the same carrier-only dynamics
  const DriveHamiltonian c_ld = hamiltonian_ld({{omega, 0.0, 0.0}}, 0.0, wt, space);
  const DriveHamiltonian c_all = hamiltonian_all_orders({{omega, 0.0, 0.0}}, 0.0, wt, space);
  const double t_pi = two_pi / (2.0 * omega);
  CHECK(propagate(c_all, ground(48), 0.0, t_pi)
            .fidelity(propagate(c_ld, ground(48), 0.0, t_pi)) >= 1.0 - 1e-12);
}

TEST_CASE("sideband coupling is strongly suppressed at the Laguerre zero") {
  const double eta = 0.090835422671735366;
  // first sign change of F at n* = 444 for this eta; the matrix element
  // |<n+1|H|n>| = (eta Omega / 2) |F(n)| collapses there by ~350x vs F(0)
  const double f0 = ladder_coupling_F(0, eta);
  const double fstar = ladder_coupling_F(444, eta);
  CHECK(fstar <= 0.0);
  CHECK(std::abs(fstar) < 5e-3 * f0);
}

TEST_CASE("bichromatic RWA Hamiltonian displaces along sigma_x branches") {
  const double eta = 0.05;
  const double omega = two_pi * 300e3;
  const FockSpace space(48);
  const BichromaticRwaHamiltonian h = hamiltonian_bichromatic_rwa(omega, eta, space);

  // <sigma_x> is conserved
  HybridState gs = ground(48);
  const double t = 2.0 * 1.5 / (eta * omega);  // alpha = 1.5
  PropagationStats stats;
  const HybridState out = propagate(h, gs, 0.0, t, {}, &stats);
  const auto [pp, pm] = out.to_basis(SpinBasis::x).spin_populations();
  CHECK(pp == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(pm == doctest::Approx(0.5).epsilon(1e-10));

  // |+>_x branch is a coherent state with |alpha| = eta Omega t / 2
  const Eigen::VectorXcd branch = out.to_basis(SpinBasis::x).spin_block(0) * std::sqrt(2.0);
  const MotionalState m(branch, true);
  CHECK(std::abs(m.mean_a()) == doctest::Approx(0.5 * eta * omega * t).epsilon(1e-8));
  CHECK(std::sqrt(m.mean_n()) == doctest::Approx(0.5 * eta * omega * t).epsilon(1e-8));

  // eta = 0: zero Hamiltonian
  const BichromaticRwaHamiltonian h0 = hamiltonian_bichromatic_rwa(omega, 0.0, space);
  const HybridState still = propagate(h0, gs, 0.0, 1e-4);
  CHECK(still.fidelity(gs) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("energy conservation for a time-independent Hamiltonian") {
  const double eta = 0.05;
  const double omega = two_pi * 300e3;
  const FockSpace space(64);
  const BichromaticRwaHamiltonian h = hamiltonian_bichromatic_rwa(omega, eta, space);
  HybridState state = ideal_cat(1.0, space).to_basis(SpinBasis::z);
  const double e0 = expectation(h, 0.0, state);
  REQUIRE(std::abs(e0) > 1.0);  // nonzero reference scale
  const HybridState out = propagate(h, state, 0.0, 5e-5);
  CHECK(std::abs(expectation(h, 0.0, out) - e0) / std::abs(e0) < 1e-8);
}

TEST_CASE("propagation is reversible") {
  const double eta = 0.08;
  const double omega = two_pi * 200e3;
  const FockSpace space(48);
  const std::vector<DriveTone> tones = {{omega, +wt, 0.0}, {omega, -wt, 0.0}};
  const DriveHamiltonian h = hamiltonian_all_orders(tones, eta, wt, space);
  const HybridState start = ground(48);
  const double t1 = 3e-5;
  const HybridState mid = propagate(h, start, 0.0, t1);
  const HybridState back = propagate(h, mid, t1, 0.0);
  CHECK(back.fidelity(start) >= 1.0 - 1e-8);
}

TEST_CASE("norm drift stays within the configured limit") {
  const double eta = 0.05;
  const double omega = two_pi * 300e3;
  const FockSpace space(32);
  const BichromaticRwaHamiltonian h = hamiltonian_bichromatic_rwa(omega, eta, space);
  PropagationStats stats;
  (void)propagate(h, ground(32), 0.0, 1e-4, {}, &stats);
  CHECK(stats.max_norm_drift <= 1e-9);
  CHECK(stats.steps_accepted > 0);
}

TEST_CASE("tolerance halving changes the answer by less than the error estimate") {
  const double eta = 0.08;
  const double omega = two_pi * 250e3;
  const FockSpace space(48);
  const std::vector<DriveTone> tones = {{omega, +wt, 0.0}, {omega, -wt, 0.0}};
  const DriveHamiltonian h = hamiltonian_ld(tones, eta, wt, space);

  PropagatorConfig loose;
  loose.rel_tol = 1e-8;
  loose.abs_tol = 1e-11;
  PropagatorConfig tight = loose;
  tight.rel_tol /= 2.0;
  tight.abs_tol /= 2.0;

  PropagationStats stats;
  const HybridState a = propagate(h, ground(48), 0.0, 4e-5, loose, &stats);
  const HybridState b = propagate(h, ground(48), 0.0, 4e-5, tight);
  const double infidelity = std::abs(1.0 - a.fidelity(b));
  CHECK(infidelity < std::max(stats.error_estimate, 1e-12));
}

TEST_CASE("truncation overflow is detected, not hidden") {
  const double eta = 0.1;
  const double omega = two_pi * 300e3;
  const FockSpace space(16);  // far too small for the displacement below
  const BichromaticRwaHamiltonian h = hamiltonian_bichromatic_rwa(omega, eta, space);
  const double t = 2.0 * 3.0 / (eta * omega);  // alpha = 3 needs ~36 levels
  CHECK_THROWS_AS((void)propagate(h, ground(16), 0.0, t), TruncationOverflowError);
}

TEST_SUITE_END();
