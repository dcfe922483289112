#include "secswipt/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace secswipt {

Scalar sinr_iu(const EffectiveChannels& eff, const BeamformingSolution& sol, Scalar noise_w) {
  if (!(noise_w > 0.0)) {
    throw std::domain_error("sinr_iu: noise power must be positive");
  }
  const Scalar sig = std::norm(eff.h.dot(sol.w));
  const Scalar interf = (sol.p_mat.adjoint() * eff.h).squaredNorm();
  return sig / (interf + noise_w);
}

Scalar sinr_eu(const EffectiveChannels& eff, const BeamformingSolution& sol, Index m,
               Scalar noise_w) {
  if (!(noise_w > 0.0)) {
    throw std::domain_error("sinr_eu: noise power must be positive");
  }
  const VecC& g = eff.g.at(static_cast<std::size_t>(m));
  const Scalar sig = std::norm(g.dot(sol.w));
  const Scalar interf = (sol.p_mat.adjoint() * g).squaredNorm();
  return sig / (interf + noise_w);
}

Scalar harvested_power(const EffectiveChannels& eff, const BeamformingSolution& sol, Index m) {
  const VecC& g = eff.g.at(static_cast<std::size_t>(m));
  return std::norm(g.dot(sol.w)) + (sol.p_mat.adjoint() * g).squaredNorm();
}

Scalar worst_case_secrecy(const EffectiveChannels& eff, const BeamformingSolution& sol,
                          const SystemConfig& cfg) {
  Scalar worst_eav = 0.0;
  for (std::size_t m = 0; m < eff.g.size(); ++m) {
    worst_eav = std::max(
        worst_eav, log2p1(sinr_eu(eff, sol, static_cast<Index>(m), cfg.noise_eu_w())));
  }
  const Scalar rate = log2p1(sinr_iu(eff, sol, cfg.noise_iu_w())) - worst_eav;
  return std::max(rate, 0.0);
}

Scalar log_sum_exp(const VecR& x, Scalar p) {
  if (x.size() == 0) {
    throw std::domain_error("log_sum_exp: empty vector");
  }
  if (!(p > 0.0)) {
    throw std::domain_error("log_sum_exp: p must be positive");
  }
  const Scalar xmax = x.maxCoeff();
  Scalar acc = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    acc += std::exp2(p * (x[i] - xmax));
  }
  return xmax + std::log2(acc) / p;
}

Scalar smooth_secrecy(const EffectiveChannels& eff, const BeamformingSolution& sol,
                      const SystemConfig& cfg) {
  VecR rates(static_cast<Index>(eff.g.size()));
  for (std::size_t m = 0; m < eff.g.size(); ++m) {
    rates[static_cast<Index>(m)] =
        log2p1(sinr_eu(eff, sol, static_cast<Index>(m), cfg.noise_eu_w()));
  }
  return log2p1(sinr_iu(eff, sol, cfg.noise_iu_w())) - log_sum_exp(rates, cfg.p_smooth);
}

}  // namespace secswipt
