#include "secswipt/longterm.hpp"

#include <cmath>
#include <stdexcept>

namespace secswipt {

namespace {

using RowC = Eigen::Matrix<Complex, 1, Eigen::Dynamic>;

// Per-user term of the SINR gradient w.r.t. phi (natural-log units):
// [ (den * (g^H w) w^H - num * (g^H P) P^H) F1 diag(c2) ]^T / den^2,
// where c2 is the RIS-side channel of this user.
VecC sinr_phi_gradient(const VecC& g_eff, const VecC& c2, const ChannelSample& sample,
                       const BeamformingSolution& sol, Scalar noise_w) {
  const Complex tw = g_eff.dot(sol.w);
  const RowC row_p = g_eff.adjoint() * sol.p_mat;
  const Scalar den = row_p.squaredNorm() + noise_w;
  const Scalar num = std::norm(tw);
  RowC row = (den * tw) * sol.w.adjoint() - num * (row_p * sol.p_mat.adjoint());
  row = (row * sample.f1).cwiseProduct(c2.transpose());
  return row.transpose() / (den * den);
}

}  // namespace

VecR grad_theta(const EffectiveChannels& eff, const ChannelSample& sample,
                const BeamformingSolution& sol, const PhaseShifts& phases,
                const SystemConfig& cfg) {
  const Index n_r = phases.n();
  const Index mm = static_cast<Index>(eff.g.size());

  const Scalar sinr_i = sinr_iu(eff, sol, cfg.noise_iu_w());
  VecC dphi = sinr_phi_gradient(eff.h, sample.h2, sample, sol, cfg.noise_iu_w()) /
              (1.0 + sinr_i);

  Scalar denom = 0.0;
  VecR powm(mm);
  for (Index m = 0; m < mm; ++m) {
    const Scalar s = sinr_eu(eff, sol, m, cfg.noise_eu_w());
    powm[m] = std::pow(1.0 + s, cfg.p_smooth - 1.0);
    denom += powm[m] * (1.0 + s);
  }
  for (Index m = 0; m < mm; ++m) {
    dphi -= (powm[m] / denom) *
            sinr_phi_gradient(eff.g[m], sample.g2[m], sample, sol, cfg.noise_eu_w());
  }

  // d/d theta = dphi o (j phi) - dphi* o (j phi*); real for a real objective.
  const VecC phi = phases.coeffs();
  VecC dtheta(n_r);
  for (Index i = 0; i < n_r; ++i) {
    const Complex c = dphi[i] * Complex(0.0, 1.0) * phi[i];
    dtheta[i] = c + std::conj(c);
  }
  const Scalar scale = dtheta.cwiseAbs().maxCoeff();
  for (Index i = 0; i < n_r; ++i) {
    if (std::abs(dtheta[i].imag()) > 1e-12 * std::max(scale, Scalar(1))) {
      throw std::logic_error("grad_theta: non-real gradient entry");
    }
  }
  return dtheta.real() / kLn2;  // bits/s/Hz per radian
}

void update_surrogate(SurrogateState& state, std::span<const ChannelSample> samples,
                      std::span<const BeamformingSolution> solutions, const SystemConfig& cfg) {
  if (samples.empty() || samples.size() != solutions.size()) {
    throw std::domain_error("update_surrogate: need matching, nonempty sample/solution lists");
  }
  const Scalar rho = state.rho();
  Scalar value_avg = 0.0;
  VecR grad_avg = VecR::Zero(state.theta.n());
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const EffectiveChannels eff = effective_channels(samples[j], state.theta);
    value_avg += smooth_secrecy(eff, solutions[j], cfg);
    grad_avg += grad_theta(eff, samples[j], solutions[j], state.theta, cfg);
  }
  const Scalar inv = 1.0 / static_cast<Scalar>(samples.size());
  state.f_value = (1.0 - rho) * state.f_value + rho * inv * value_avg;
  state.f_grad = (1.0 - rho) * state.f_grad + rho * inv * grad_avg;
}

void ssca_step(SurrogateState& state) {
  const Scalar step = state.gamma() / (2.0 * state.tau);
  for (Index i = 0; i < state.theta.n(); ++i) {
    state.theta.theta[i] = wrap_phase(state.theta.theta[i] + step * state.f_grad[i]);
  }
  ++state.t;
}

PhaseShifts project_discrete(const PhaseShifts& phases, int q_bits) {
  if (q_bits < 0) {
    throw std::domain_error("project_discrete: q_bits must be >= 0");
  }
  if (q_bits == 0) return phases;
  const Scalar levels = std::pow(2.0, q_bits);
  const Scalar step = kTwoPi / levels;
  PhaseShifts out;
  out.theta.resize(phases.n());
  for (Index i = 0; i < phases.n(); ++i) {
    const Scalar d = phases.theta[i] / step;
    Scalar k = std::floor(d);
    const Scalar frac = d - k;
    if (frac > 0.5) k += 1.0;  // exact ties keep the smaller grid angle
    k = k - levels * std::floor(k / levels);
    out.theta[i] = k * step;
  }
  return out;
}

}  // namespace secswipt
