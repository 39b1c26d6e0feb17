#include "qlrs/catgen.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <memory>
#include <stdexcept>
#include <string>

namespace qlrs {

namespace {

void validate_spec(const CatGenSpec& spec) {
  if (!(spec.eta_control > 0.0 && spec.eta_control < 1.0)) {
    throw std::invalid_argument("eta_control must be in (0, 1)");
  }
  if (!(spec.rabi > 0.0)) throw std::invalid_argument("rabi must be > 0");
  if (spec.rabi > spec.rabi_cap * (1.0 + 1e-12)) {
    throw std::invalid_argument("rabi exceeds the configured hardware cap");
  }
}

// Keep trajectories bounded; decimate by 2 when over budget.
void push_trajectory(std::vector<TrajectoryPoint>& traj, TrajectoryPoint p) {
  constexpr size_t kMax = 8192;
  traj.push_back(p);
  if (traj.size() > kMax) {
    std::vector<TrajectoryPoint> half;
    half.reserve(kMax / 2 + 1);
    for (size_t i = 0; i < traj.size(); i += 2) half.push_back(traj[i]);
    traj.swap(half);
  }
}

// Complex branch amplitude of the |+>_x component.
cplx plus_branch_amplitude(const HybridState& s) {
  const HybridState x = s.to_basis(SpinBasis::x);
  const int N = x.fock_dim();
  Eigen::VectorXcd plus = x.amps().head(N);
  const double nrm = plus.norm();
  if (nrm < 1e-12) return 0.0;
  plus /= nrm;
  cplx acc = 0.0;
  for (int n = 0; n + 1 < N; ++n) {
    acc += std::conj(plus[n]) * std::sqrt(double(n + 1)) * plus[n + 1];
  }
  return acc;
}

double fidelity_vs_ideal_cat(const HybridState& s, double alpha_mag, const FockSpace& space) {
  if (alpha_mag < 1e-12) {
    return std::norm(s.to_basis(SpinBasis::z).amps()[0]);  // vs |g>|0>
  }
  const cplx a_plus = plus_branch_amplitude(s);
  const cplx axis = (std::abs(a_plus) < 1e-12) ? cplx(1.0, 0.0) : a_plus / std::abs(a_plus);
  const cplx alpha_ref = alpha_mag * axis;
  if (!space.admits(alpha_ref)) return 0.0;
  const HybridState reference = ideal_cat(alpha_ref, space);
  return reference.fidelity(s.to_basis(SpinBasis::x));
}

}  // namespace

double max_alpha(double eta) {
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("max_alpha needs 0 < eta < 1");
  const double x = eta * eta;
  double lm = 1.0;       // L_0^1
  double l = 2.0 - x;    // L_1^1
  if (l <= 0.0) return 1.0;
  long n = 1;
  while (true) {
    const double next = ((2.0 * n + 2.0 - x) * l - (n + 1.0) * lm) / (n + 1.0);
    ++n;
    if (next <= 0.0) return std::sqrt(static_cast<double>(n));
    lm = l;
    l = next;
    if (n > 500'000'000L) throw std::runtime_error("max_alpha: no Laguerre zero found");
  }
}

double heating_phase_variance(double rate, double alpha, double duration) {
  if (rate < 0.0 || alpha < 0.0 || duration < 0.0) {
    throw std::invalid_argument("heating_phase_variance needs non-negative inputs");
  }
  return 8.0 * rate * alpha * alpha * (2.0 * duration / 3.0);
}

double coherence_factor(double phase_variance) {
  if (phase_variance < 0.0) throw std::invalid_argument("phase variance must be >= 0");
  return std::exp(-0.5 * phase_variance);
}

CatGenResult generate_cat_ld(const CatGenSpec& spec) {
  validate_spec(spec);
  const double rate = 0.5 * spec.eta_control * spec.rabi;

  double alpha = 0.0, duration = 0.0;
  switch (spec.target.kind) {
    case CatGenTarget::Kind::alpha:
      alpha = spec.target.value;
      duration = alpha / rate;
      break;
    case CatGenTarget::Kind::duration:
      duration = spec.target.value;
      alpha = rate * duration;
      break;
    case CatGenTarget::Kind::saturate:
      throw std::invalid_argument("ld_analytic has no saturation point");
  }

  CatGenResult result;
  result.method = CatGenMethod::ld_analytic;
  result.achieved_alpha = alpha;
  result.duration = duration;
  result.fidelity_vs_ideal = 1.0;
  result.trajectory = {{0.0, 0.0}, {duration, alpha}};
  result.rabi = spec.rabi;
  result.eta_control = spec.eta_control;
  result.trap_omega = spec.trap_omega;
  if (spec.space.admits(alpha)) result.state = ideal_cat(alpha, spec.space);
  return result;
}

double growth_ode_duration(double target_alpha, double eta, double rabi) {
  if (!(target_alpha >= 0.0)) throw std::invalid_argument("target alpha must be >= 0");
  if (target_alpha == 0.0) return 0.0;
  const double x = eta * eta;
  const double prefactor = 0.5 * eta * rabi * std::exp(-0.5 * x);
  const double stall_rate = 1e-3 * (0.5 * eta * rabi);

  double lm = 1.0, l = 2.0 - x;  // L_0^1, L_1^1
  double alpha = 0.0, tau = 0.0;
  long n = 0;
  while (alpha < target_alpha) {
    const double ln = (n == 0) ? 1.0 : l;
    const double rate = prefactor * ln / (n + 1.0);
    if (rate <= stall_rate) {
      throw StalledGenerationError(
          "growth stalled at alpha=" + std::to_string(alpha) + " before target " +
              std::to_string(target_alpha),
          alpha);
    }
    const double next_alpha = std::min(target_alpha, std::sqrt(double(n + 1)));
    tau += (next_alpha - alpha) / rate;
    alpha = next_alpha;
    if (n >= 1) {
      const double next = ((2.0 * n + 2.0 - x) * l - (n + 1.0) * lm) / (n + 1.0);
      lm = l;
      l = next;
    }
    ++n;
  }
  return tau;
}

CatGenResult generate_cat_growth_ode(const CatGenSpec& spec) {
  validate_spec(spec);
  const double eta = spec.eta_control;
  const double x = eta * eta;
  const double prefactor = 0.5 * eta * spec.rabi * std::exp(-0.5 * x);
  const double stall_rate = 1e-3 * (0.5 * eta * spec.rabi);

  CatGenResult result;
  result.method = CatGenMethod::growth_ode;
  result.rabi = spec.rabi;
  result.eta_control = eta;
  result.trap_omega = spec.trap_omega;
  push_trajectory(result.trajectory, {0.0, 0.0});

  double lm = 1.0, l = 2.0 - x;
  double alpha = 0.0, tau = 0.0;
  long n = 0;
  while (true) {
    const double ln = (n == 0) ? 1.0 : l;
    const double rate = prefactor * ln / (n + 1.0);
    const bool stalled = rate <= stall_rate;

    if (stalled) {
      if (spec.target.kind == CatGenTarget::Kind::alpha && alpha < spec.target.value) {
        throw StalledGenerationError(
            "growth stalled at alpha=" + std::to_string(alpha) + " before target " +
                std::to_string(spec.target.value),
            alpha);
      }
      break;  // saturate / duration: stop where growth ends
    }

    double next_alpha = std::sqrt(double(n + 1));
    if (spec.target.kind == CatGenTarget::Kind::alpha) {
      next_alpha = std::min(next_alpha, spec.target.value);
    }
    double dt = (next_alpha - alpha) / rate;
    if (spec.target.kind == CatGenTarget::Kind::duration &&
        tau + dt >= spec.target.value) {
      alpha += (spec.target.value - tau) * rate;
      tau = spec.target.value;
      push_trajectory(result.trajectory, {tau, alpha});
      break;
    }
    tau += dt;
    alpha = next_alpha;
    push_trajectory(result.trajectory, {tau, alpha});
    if (spec.target.kind == CatGenTarget::Kind::alpha && alpha >= spec.target.value) break;

    if (n >= 1) {
      const double next = ((2.0 * n + 2.0 - x) * l - (n + 1.0) * lm) / (n + 1.0);
      lm = l;
      l = next;
    }
    ++n;
  }

  result.achieved_alpha = alpha;
  result.duration = tau;
  result.fidelity_vs_ideal = 1.0;
  if (spec.space.admits(alpha)) result.state = ideal_cat(alpha, spec.space);
  return result;
}

CatGenResult generate_cat_full(const CatGenSpec& spec, const PropagatorConfig& config,
                               const FullDynamicsOptions& options) {
  validate_spec(spec);
  const double eta = spec.eta_control;
  const double rate_ld = 0.5 * eta * spec.rabi;
  const double sideband_period = two_pi / (eta * spec.rabi);

  if (spec.target.kind == CatGenTarget::Kind::alpha) {
    spec.space.require_admits(spec.target.value);
  }

  std::unique_ptr<Hamiltonian> h;
  if (options.rwa) {
    h = std::make_unique<BichromaticRwaHamiltonian>(
        hamiltonian_bichromatic_rwa_all_orders(spec.rabi, eta, spec.space));
  } else {
    const std::vector<DriveTone> tones = {{spec.rabi, +spec.trap_omega, 0.0},
                                          {spec.rabi, -spec.trap_omega, 0.0}};
    h = std::make_unique<DriveHamiltonian>(
        hamiltonian_all_orders(tones, eta, spec.trap_omega, spec.space));
  }

  double chunk = options.sample_interval;
  double t_end = 0.0;
  switch (spec.target.kind) {
    case CatGenTarget::Kind::alpha: {
      const double t_est = spec.target.value / rate_ld;
      if (chunk <= 0.0) chunk = t_est / 256.0;
      t_end = 50.0 * t_est + 100.0 * sideband_period;
      break;
    }
    case CatGenTarget::Kind::duration:
      t_end = spec.target.value;
      if (chunk <= 0.0) chunk = std::max(t_end / 128.0, 1e-12);
      break;
    case CatGenTarget::Kind::saturate: {
      const double t_cap = max_alpha(eta) / rate_ld;
      if (chunk <= 0.0) chunk = sideband_period / 4.0;
      t_end = 60.0 * t_cap;
      break;
    }
  }

  CatGenResult result;
  result.method = CatGenMethod::full_dynamics;
  result.rabi = spec.rabi;
  result.eta_control = eta;
  result.trap_omega = spec.trap_omega;
  result.rwa = options.rwa;
  result.config = config;

  HybridState state = HybridState::ground(spec.space);
  double t = 0.0;
  double alpha = 0.0;
  double alpha_max = 0.0;
  push_trajectory(result.trajectory, {0.0, 0.0});

  // stall detector: growth below 1e-3 of the Lamb-Dicke rate across a
  // 10-sideband-period window
  const double stall_window = 10.0 * sideband_period;
  const double stall_rate = 1e-3 * rate_ld;
  std::deque<TrajectoryPoint> window;
  window.push_back({0.0, 0.0});

  HybridState prev = state;
  double t_prev = 0.0, alpha_prev = 0.0;

  while (t < t_end) {
    const double dt = std::min(chunk, t_end - t);
    prev = state;
    t_prev = t;
    alpha_prev = alpha;

    state = propagate(*h, state, t, t + dt, config);
    t += dt;
    alpha = std::sqrt(std::max(0.0, state.mean_n()));
    alpha_max = std::max(alpha_max, alpha);
    push_trajectory(result.trajectory, {t, alpha});

    if (spec.target.kind == CatGenTarget::Kind::alpha && alpha >= spec.target.value) {
      //  linear interpolation to the crossing, then land exactly there
      const double frac = (spec.target.value - alpha_prev) /
                          std::max(alpha - alpha_prev, 1e-300);
      const double t_star = t_prev + frac * dt;
      state = propagate(*h, prev, t_prev, t_star, config);
      t = t_star;
      alpha = std::sqrt(std::max(0.0, state.mean_n()));
      result.trajectory.back() = {t, alpha};
      break;
    }

    if (spec.target.kind != CatGenTarget::Kind::duration) {
      window.push_back({t, alpha});
      while (window.size() > 2 && window[1].t <= t - stall_window) window.pop_front();
      if (window.front().t <= t - stall_window) {
        const double growth = (alpha - window.front().alpha) / (t - window.front().t);
        if (growth < stall_rate) {
          if (spec.target.kind == CatGenTarget::Kind::alpha) {
            throw StalledGenerationError(
                "full dynamics stalled at alpha=" + std::to_string(alpha) +
                    " before target " + std::to_string(spec.target.value),
                alpha);
          }
          break;  // saturation reached
        }
      }
    }
  }

  if (spec.target.kind == CatGenTarget::Kind::alpha && alpha + 1e-9 < spec.target.value &&
      t >= t_end) {
    throw StalledGenerationError("full dynamics ran out of time before target", alpha);
  }

  result.duration = t;
  result.achieved_alpha =
      (spec.target.kind == CatGenTarget::Kind::saturate) ? alpha_max : alpha;
  result.fidelity_vs_ideal = fidelity_vs_ideal_cat(state, alpha, spec.space);
  result.cat_axis = [&] {
    const cplx a_plus = plus_branch_amplitude(state);
    return (std::abs(a_plus) < 1e-12) ? cplx(1.0, 0.0) : a_plus / std::abs(a_plus);
  }();
  result.state = std::move(state);
  return result;
}

}  // namespace qlrs
