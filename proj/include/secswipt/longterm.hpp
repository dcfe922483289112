#pragma once

#include <span>
#include <vector>

#include "secswipt/metrics.hpp"

namespace secswipt {

/// Running estimates of the average smooth secrecy objective and its gradient
/// w.r.t. theta, refreshed once per frame from the frame's channel samples.
struct SurrogateState {
  Scalar f_value = 0.0;
  VecR f_grad;  // length N_r
  PhaseShifts theta;
  int t = 0;  // frame counter
  Scalar tau = 1.0;
  Scalar rho_exponent = 0.6;
  Scalar gamma_exponent = 0.9;

  Scalar rho() const { return std::pow(static_cast<Scalar>(t + 1), -rho_exponent); }
  Scalar gamma() const { return std::pow(static_cast<Scalar>(t + 1), -gamma_exponent); }

  static SurrogateState init(const PhaseShifts& theta0, Scalar tau = 1.0,
                             Scalar rho_exp = 0.6, Scalar gamma_exp = 0.9) {
    SurrogateState s;
    s.theta = theta0;
    s.f_grad = VecR::Zero(theta0.n());
    s.tau = tau;
    s.rho_exponent = rho_exp;
    s.gamma_exponent = gamma_exp;
    return s;
  }
};

/// Analytical gradient of the smooth secrecy objective (bits/s/Hz) w.r.t.
/// theta, holding (w, P) fixed. `eff` must be the effective channels of
/// `sample` at `phases`.
VecR grad_theta(const EffectiveChannels& eff, const ChannelSample& sample,
                const BeamformingSolution& sol, const PhaseShifts& phases,
                const SystemConfig& cfg);

/// Convex-combination recursions for f^t and its gradient, from the frame's
/// samples and their short-term solutions (computed at state.theta). The first
/// frame (t = 0) reduces to the plain sample average.
void update_surrogate(SurrogateState& state, std::span<const ChannelSample> samples,
                      std::span<const BeamformingSolution> solutions, const SystemConfig& cfg);

/// Maximizes the quadratic surrogate in closed form and blends:
/// theta <- theta + (gamma / 2 tau) f_grad, wrapped into (0, 2pi]; advances t.
void ssca_step(SurrogateState& state);

/// Maps each entry to the circularly nearest point of {0, 2pi/L, ...},
/// L = 2^q_bits; ties go to the smaller grid angle. q_bits = 0 is the
/// identity (continuous phases).
PhaseShifts project_discrete(const PhaseShifts& phases, int q_bits);

}  // namespace secswipt
