#include "qlrs/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qlrs/physics.hpp"

namespace qlrs {

namespace {

void check_tone(const DriveTone& tone) {
  if (!(tone.rabi >= 0.0)) throw std::invalid_argument("tone rabi must be >= 0");
}

// out_head += c * M(t) psi_tail-like block operations, with
// M(t) = I + i eta (e^{-iwt} B + e^{iwt} B^dag) acting on a Fock block.
// B psi: (B psi)[n] = b[n] psi[n+1];  B^dag psi: (B^dag psi)[n+1] = b[n] psi[n].
void accumulate_m(Eigen::VectorXcd& out, int out_off, const Eigen::VectorXcd& psi,
                  int in_off, int N, const Eigen::VectorXd& b, double eta, cplx c,
                  cplx em, cplx ep, bool adjoint) {
  // adjoint = false: out += c (I + i eta (em B + ep B^dag)) psi
  // adjoint = true : out += c (I - i eta (ep B + em B^dag)) psi
  const cplx ie = cplx(0.0, eta);
  const cplx lower = adjoint ? -ie * ep : ie * em;  // coefficient of B
  const cplx raise = adjoint ? -ie * em : ie * ep;  // coefficient of B^dag
  for (int n = 0; n < N; ++n) out[out_off + n] += c * psi[in_off + n];
  for (int n = 0; n + 1 < N; ++n) {
    out[out_off + n] += c * lower * b[n] * psi[in_off + n + 1];
    out[out_off + n + 1] += c * raise * b[n] * psi[in_off + n];
  }
}

}  // namespace

DriveHamiltonian::DriveHamiltonian(std::vector<DriveTone> tones, double eta,
                                   double trap_omega, Eigen::VectorXd band)
    : tones_(std::move(tones)), eta_(eta), trap_omega_(trap_omega), band_(std::move(band)) {
  for (const auto& t : tones_) check_tone(t);
  if (!(trap_omega_ > 0.0)) throw std::invalid_argument("trap frequency must be > 0");
}

void DriveHamiltonian::apply(double t, const Eigen::VectorXcd& psi,
                             Eigen::VectorXcd& out) const {
  const int N = fock_dim();
  out.setZero(2 * N);
  const cplx em = std::polar(1.0, -trap_omega_ * t);
  const cplx ep = std::conj(em);
  for (const auto& tone : tones_) {
    const cplx c = 0.5 * tone.rabi * std::polar(1.0, -tone.detuning * t + tone.phase);
    // sigma_+ (x) M(t): |g> block -> |e> block
    accumulate_m(out, N, psi, 0, N, band_, eta_, c, em, ep, false);
    // h.c.: sigma_- (x) M(t)^dag: |e> block -> |g> block
    accumulate_m(out, 0, psi, N, N, band_, eta_, std::conj(c), em, ep, true);
  }
}

double DriveHamiltonian::max_oscillation() const {
  double w = 0.0;
  for (const auto& tone : tones_) {
    if (eta_ > 0.0) {
      w = std::max(w, std::abs(tone.detuning) + trap_omega_);
    } else {
      w = std::max(w, std::abs(tone.detuning));
    }
  }
  return w;
}

BichromaticRwaHamiltonian::BichromaticRwaHamiltonian(double rabi, double eta,
                                                     Eigen::VectorXd band)
    : coupling_(0.5 * eta * rabi), band_(std::move(band)) {
  if (!(rabi >= 0.0)) throw std::invalid_argument("rabi must be >= 0");
}

void BichromaticRwaHamiltonian::apply(double, const Eigen::VectorXcd& psi,
                                      Eigen::VectorXcd& out) const {
  const int N = fock_dim();
  out.setZero(2 * N);
  // sigma_x swaps the spin blocks; (B + B^dag) is the symmetric band.
  for (int s = 0; s < 2; ++s) {
    const int src = s * N;
    const int dst = (1 - s) * N;
    for (int n = 0; n + 1 < N; ++n) {
      out[dst + n] += coupling_ * band_[n] * psi[src + n + 1];
      out[dst + n + 1] += coupling_ * band_[n] * psi[src + n];
    }
  }
}

DriveHamiltonian hamiltonian_ld(const std::vector<DriveTone>& tones, double eta,
                                double trap_omega, const FockSpace& space) {
  return DriveHamiltonian(tones, eta, trap_omega, ladder_band(space));
}

DriveHamiltonian hamiltonian_all_orders(const std::vector<DriveTone>& tones, double eta,
                                        double trap_omega, const FockSpace& space) {
  Eigen::VectorXd band =
      (eta > 0.0) ? nonlinear_ladder_band(eta, space) : ladder_band(space);
  return DriveHamiltonian(tones, eta, trap_omega, std::move(band));
}

BichromaticRwaHamiltonian hamiltonian_bichromatic_rwa(double rabi, double eta,
                                                      const FockSpace& space) {
  return BichromaticRwaHamiltonian(rabi, eta, ladder_band(space));
}

BichromaticRwaHamiltonian hamiltonian_bichromatic_rwa_all_orders(double rabi, double eta,
                                                                 const FockSpace& space) {
  Eigen::VectorXd band =
      (eta > 0.0) ? nonlinear_ladder_band(eta, space) : ladder_band(space);
  return BichromaticRwaHamiltonian(rabi, eta, std::move(band));
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// 4th-order weights for the embedded error estimate.
constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                 e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

struct Derivative {
  const Hamiltonian* h;
  mutable Eigen::VectorXcd scratch;
  void operator()(double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dydt) const {
    h->apply(t, y, scratch);
    dydt = cplx(0.0, -1.0) * scratch;
  }
};

}  // namespace

HybridState propagate(const Hamiltonian& h, const HybridState& state, double t0, double t1,
                      const PropagatorConfig& config, PropagationStats* stats) {
  if (state.fock_dim() != h.fock_dim()) {
    throw std::invalid_argument("state and Hamiltonian dimensions differ");
  }
  const double span = t1 - t0;
  PropagationStats local;
  if (span == 0.0) {
    if (stats) *stats = local;
    return state;
  }
  const double dir = (span > 0.0) ? 1.0 : -1.0;

  // Oscillatory terms need a hard step cap independent of error control.
  double hmax = config.max_step;
  const double wosc = h.max_oscillation();
  if (wosc > 0.0) hmax = std::min(hmax, (two_pi / wosc) / 50.0);
  if (!(hmax > 0.0)) throw std::invalid_argument("max_step must be > 0");

  Eigen::VectorXcd y = state.amps();
  const double norm0 = y.norm();
  const int dim = static_cast<int>(y.size());

  Derivative deriv{&h, Eigen::VectorXcd(dim)};
  Eigen::VectorXcd k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim);
  Eigen::VectorXcd ytmp(dim), y5(dim);

  double t = t0;
  double step = std::min(hmax, std::abs(span) / 16.0);
  deriv(t, y, k1);  // FSAL seed

  const int fock_n = h.fock_dim();
  const double tol_floor = 1e-14;
  long guard = 0;
  while (dir * (t1 - t) > 0.0) {
    if (++guard > 200'000'000L) {
      throw NormDriftError("propagate: step limit exceeded");
    }
    step = std::min(step, std::abs(t1 - t));
    const double hs = dir * step;

    ytmp = y + hs * (a21 * k1);
    deriv(t + c2 * hs, ytmp, k2);
    ytmp = y + hs * (a31 * k1 + a32 * k2);
    deriv(t + c3 * hs, ytmp, k3);
    ytmp = y + hs * (a41 * k1 + a42 * k2 + a43 * k3);
    deriv(t + c4 * hs, ytmp, k4);
    ytmp = y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    deriv(t + c5 * hs, ytmp, k5);
    ytmp = y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    deriv(t + hs, ytmp, k6);
    y5 = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    deriv(t + hs, y5, k7);

    // weighted rms of the embedded 5th/4th order difference
    double err = 0.0;
    for (int i = 0; i < dim; ++i) {
      const cplx e = hs * ((b1 - e1) * k1[i] + (b3 - e3) * k3[i] + (b4 - e4) * k4[i] +
                           (b5 - e5) * k5[i] + (b6 - e6) * k6[i] - e7 * k7[i]);
      const double scale =
          config.abs_tol + config.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
      const double r = std::abs(e) / std::max(scale, tol_floor);
      err += r * r;
    }
    err = std::sqrt(err / dim);

    if (err <= 1.0) {
      t += hs;
      y.swap(y5);
      k1.swap(k7);  // FSAL
      ++local.steps_accepted;
      local.error_estimate += err * config.rel_tol;

      const double drift = std::abs(y.norm() - norm0);
      local.max_norm_drift = std::max(local.max_norm_drift, drift);
      if (drift > config.norm_drift_limit) {
        throw NormDriftError("propagate: norm drift " + std::to_string(drift) +
                             " exceeds limit " + std::to_string(config.norm_drift_limit));
      }
      const int start = fock_n - (fock_n + 7) / 8;
      double tail = 0.0;
      for (int b = 0; b < 2; ++b) {
        for (int n = start; n < fock_n; ++n) tail += std::norm(y[b * fock_n + n]);
      }
      if (tail > config.tail_threshold) {
        throw TruncationOverflowError("propagate: tail population " + std::to_string(tail) +
                                      " exceeds threshold at t=" + std::to_string(t));
      }
    } else {
      ++local.steps_rejected;
    }

    const double factor =
        std::clamp(0.9 * std::pow(std::max(err, 1e-12), -0.2), 0.2, 5.0);
    step = std::min(step * factor, hmax);
  }

  if (stats) *stats = local;
  const double tol = std::max(1e-9, config.norm_drift_limit);
  return HybridState(std::move(y), state.basis(), false, tol);
}

double expectation(const Hamiltonian& h, double t, const HybridState& state) {
  Eigen::VectorXcd hp(state.amps().size());
  h.apply(t, state.amps(), hp);
  return state.amps().dot(hp).real();
}

}  // namespace qlrs
