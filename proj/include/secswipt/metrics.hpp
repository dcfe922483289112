#pragma once

#include "secswipt/scenario.hpp"
#include "secswipt/types.hpp"

namespace secswipt {

/// Short-term transmit design: information beam w, energy beams P (column m
/// serves EU m), plus the auxiliary variables of the reformulated objective.
struct BeamformingSolution {
  VecC w;      // N_s
  MatC p_mat;  // N_s x M
  Scalar z = 1.0;
  Complex u = 0.0;
  Scalar v = 1.0;
  VecR y;  // M, per-EU SINR bounds

  Scalar total_power() const { return w.squaredNorm() + p_mat.squaredNorm(); }

  static BeamformingSolution zeros(Index n_s, Index m) {
    BeamformingSolution s;
    s.w = VecC::Zero(n_s);
    s.p_mat = MatC::Zero(n_s, m);
    s.y = VecR::Zero(m);
    return s;
  }
};

/// |h^H w|^2 / (||h^H P||^2 + noise).
Scalar sinr_iu(const EffectiveChannels& eff, const BeamformingSolution& sol, Scalar noise_w);

/// |g_m^H w|^2 / (||g_m^H P||^2 + noise).
Scalar sinr_eu(const EffectiveChannels& eff, const BeamformingSolution& sol, Index m,
               Scalar noise_w);

/// Total RF power received by EU m: |g_m^H w|^2 + ||g_m^H P||^2 (noise ignored).
Scalar harvested_power(const EffectiveChannels& eff, const BeamformingSolution& sol, Index m);

/// [log2(1 + SINR_I) - max_m log2(1 + SINR_m)]^+, in bits/s/Hz.
Scalar worst_case_secrecy(const EffectiveChannels& eff, const BeamformingSolution& sol,
                          const SystemConfig& cfg);

/// Base-2 smoothed max: (1/p) log2 sum_i 2^{p x_i}, computed with
/// max-subtraction. Satisfies max(x) <= result <= max(x) + (1/p) log2 len(x).
Scalar log_sum_exp(const VecR& x, Scalar p);

/// Smooth secrecy objective: log2(1 + SINR_I) - (1/p) log2 sum_m (1 + SINR_m)^p.
/// Lower-bounds the unclamped secrecy rate, with gap at most (1/p) log2 M.
Scalar smooth_secrecy(const EffectiveChannels& eff, const BeamformingSolution& sol,
                      const SystemConfig& cfg);

}  // namespace secswipt
