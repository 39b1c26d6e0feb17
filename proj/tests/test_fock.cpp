#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "qlrs/fock.hpp"

using namespace qlrs;
using qlrs::test::max_abs_diff_interior;

TEST_SUITE_BEGIN("fock");

TEST_CASE("coherent state basics") {
  const FockSpace space(64);

  const MotionalState vac = coherent_state(0.0, space);
  CHECK(std::abs(vac.amps()[0] - 1.0) < 1e-15);
  CHECK(vac.amps().tail(63).norm() == 0.0);

  const MotionalState a2 = coherent_state(2.0, space);
  CHECK(a2.mean_n() == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(std::abs(a2.amps()[0]) == doctest::Approx(std::exp(-2.0)).epsilon(1e-9));
  CHECK(a2.norm() == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(coherent_state(10.0, FockSpace(32)), TruncationOverflowError);
}

TEST_CASE("displacement matrix closed form") {
  const FockSpace space(64);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(64, 64);

  CHECK(qlrs::test::max_abs_diff(displacement_matrix(0.0, space), id) < 1e-14);
  CHECK(std::abs(displacement_matrix(1.0, space)(0, 0) - std::exp(-0.5)) < 1e-12);

  // coherent state is the displaced vacuum
  const Eigen::MatrixXcd D = displacement_matrix(cplx(1.1, -0.7), space);
  const MotionalState ref = coherent_state(cplx(1.1, -0.7), space);
  CHECK((D.col(0) - ref.amps()).norm() < 1e-9);
}

TEST_CASE("displacement closed form agrees with the matrix exponential") {
  const FockSpace space(128);
  const cplx alpha(1.5, 0.5);
  const Eigen::MatrixXcd analytic = displacement_matrix(alpha, space);
  const Eigen::MatrixXcd numeric = displacement_matrix_expm(alpha, space);
  CHECK(max_abs_diff_interior(analytic, numeric) < 1e-9);
}

TEST_CASE("expm displacement oracle sanity") {
  const FockSpace space(64);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(64, 64);
  CHECK(qlrs::test::max_abs_diff(displacement_matrix_expm(0.0, space), id) < 1e-12);
  const cplx alpha(0.8, -1.2);
  const Eigen::MatrixXcd fwd = displacement_matrix_expm(alpha, space);
  const Eigen::MatrixXcd bwd = displacement_matrix_expm(-alpha, space);
  CHECK(max_abs_diff_interior(fwd * bwd, id) < 1e-10);
}

TEST_CASE("displacement unitarity and composition properties") {
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> mag(0.1, 3.0), phase(0.0, two_pi);
  const FockSpace space(128);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(128, 128);

  for (int trial = 0; trial < 6; ++trial) {
    const cplx a = std::polar(mag(rng), phase(rng));
    const cplx b = std::polar(mag(rng), phase(rng));
    const Eigen::MatrixXcd Da = displacement_matrix(a, space);
    CHECK(max_abs_diff_interior(Da.adjoint() * Da, id) < 1e-9);

    // composition up to the geometric phase Im(a conj(b))
    const Eigen::MatrixXcd lhs = displacement_matrix(a, space) * displacement_matrix(b, space);
    const cplx phase_factor = std::exp(cplx(0.0, std::imag(a * std::conj(b))));
    const Eigen::MatrixXcd rhs = phase_factor * displacement_matrix(a + b, space);
    CHECK(max_abs_diff_interior(lhs, rhs) < 1e-8);
  }
}

TEST_CASE("associated Laguerre recurrence") {
  CHECK(laguerre_assoc(0, 1, 0.37) == 1.0);
  CHECK(laguerre_assoc(1, 1, 0.0081) == doctest::Approx(1.9919).epsilon(1e-12));
  // closed forms: L_2^1(x) = 3 - 3x + x^2/2, L_2^0(x) = 1 - 2x + x^2/2
  for (double x : {0.01, 0.5, 2.0}) {
    CHECK(laguerre_assoc(2, 1, x) ==
          doctest::Approx(3.0 - 3.0 * x + 0.5 * x * x).epsilon(1e-12));
    CHECK(laguerre_assoc(2, 0, x) ==
          doctest::Approx(1.0 - 2.0 * x + 0.5 * x * x).epsilon(1e-12));
  }
  CHECK_THROWS_AS(laguerre_assoc(-1, 1, 0.1), std::invalid_argument);
}

TEST_CASE("sideband coupling factor F") {
  CHECK(ladder_coupling_F(0, 0.1) == doctest::Approx(std::exp(-0.005)).epsilon(1e-12));

  const double eta = 0.090835422671735366;
  // coupling relative to the Lamb-Dicke value sqrt(n+1) decreases
  // monotonically with n below the first Laguerre zero
  double prev = ladder_coupling_F(0, eta);
  for (int n = 1; n <= 400; ++n) {
    const double rel = ladder_coupling_F(n, eta) / std::sqrt(n + 1.0);
    CHECK(rel < prev);
    prev = rel;
  }

  // first non-positive F: the recurrence scan gives n* = 444 for this eta;
  // the Bessel-zero estimate j11^2/(4 eta^2) - 1 = 443.9 agrees within 2%.
  int nstar = 0;
  while (ladder_coupling_F(nstar, eta) > 0.0) ++nstar;
  CHECK(nstar == 444);
  const double bessel_estimate = 3.8317059702075125 * 3.8317059702075125 /
                                 (4.0 * eta * eta);
  CHECK(std::abs(nstar - bessel_estimate) / bessel_estimate < 0.02);
  CHECK(ladder_coupling_F(nstar, eta) <= 0.0);
  CHECK(ladder_coupling_F(nstar - 1, eta) > 0.0);
}

TEST_CASE("nonlinear ladder operator") {
  const double eta = 0.01;
  const FockSpace space(32);
  const Eigen::MatrixXcd A = nonlinear_ladder(eta, space);
  const Eigen::MatrixXcd a = ladder_lowering(space);

  // A|0> = 0
  Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(32);
  e0[0] = 1.0;
  CHECK((A * e0).norm() == 0.0);

  // band values are F(n)
  for (int n = 0; n + 1 < 32; ++n) {
    CHECK(std::real(A(n, n + 1)) == doctest::Approx(ladder_coupling_F(n, eta)).epsilon(1e-15));
  }

  // Lamb-Dicke limit: relative deviation from a is O((n+1) eta^2)
  for (int n = 0; n <= 10; ++n) {
    const double rel = std::abs(A(n, n + 1) - a(n, n + 1)) / std::abs(a(n, n + 1));
    CHECK(rel <= (n + 1) * eta * eta);
  }

  // banded fast path matches the dense operator exactly
  const Eigen::VectorXd band = nonlinear_ladder_band(eta, space);
  for (int n = 0; n + 1 < 32; ++n) {
    CHECK(std::abs(band[n] - std::real(A(n, n + 1))) < 1e-12);
  }
  const Eigen::VectorXd lband = ladder_band(space);
  for (int n = 0; n + 1 < 32; ++n) {
    CHECK(lband[n] == std::real(a(n, n + 1)));
  }
}

TEST_CASE("ideal cat construction") {
  const FockSpace space(64);

  // alpha = 0 collapses to |g>|0> up to a global phase
  const HybridState zero_cat = ideal_cat(0.0, space);
  const HybridState z = zero_cat.to_basis(SpinBasis::z);
  CHECK(std::abs(z.amps()[0]) == doctest::Approx(1.0).epsilon(1e-12));

  const FockSpace big(192);
  const HybridState cat = ideal_cat(10.0, big);
  CHECK(cat.norm() == doctest::Approx(1.0).epsilon(1e-9));

  // branch coherence <-alpha|alpha> = exp(-2|alpha|^2) is numerically zero
  const Eigen::VectorXcd plus = cat.spin_block(0);
  const Eigen::VectorXcd minus = cat.spin_block(1);
  CHECK(std::abs(plus.dot(minus)) < 1e-15);

  // x-basis weights are (1/2, 1/2)
  const auto [p_plus, p_minus] = cat.spin_populations();
  CHECK(p_plus == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(p_minus == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("hybrid state basis handling") {
  const FockSpace space(16);
  const HybridState g = HybridState::ground(space);
  const HybridState x = g.to_basis(SpinBasis::x);
  const HybridState back = x.to_basis(SpinBasis::z);
  CHECK(back.fidelity(g) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS((void)g.overlap(x), std::invalid_argument);

  const auto [pp, pm] = x.spin_populations();
  CHECK(pp == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(pm == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("tail population flags truncation validity") {
  const FockSpace space(32);
  const MotionalState small = coherent_state(1.0, space);
  CHECK(small.truncation_valid(1e-9));

  Eigen::VectorXcd top = Eigen::VectorXcd::Zero(32);
  top[31] = 1.0;
  const MotionalState bad(top, false);
  CHECK(!bad.truncation_valid(1e-9));
  CHECK(bad.tail_population() == doctest::Approx(1.0));
}

TEST_SUITE_END();
