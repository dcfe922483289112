#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "secswipt/metrics.hpp"
#include "secswipt/scenario.hpp"
#include "secswipt/types.hpp"

namespace secswipt {

enum class SolveStatus { kOptimal, kMaxIter, kInfeasible };

struct SolverReport {
  SolveStatus status = SolveStatus::kOptimal;
  Scalar objective = 0.0;      // subproblem objective at the returned point
  Scalar stationarity = 0.0;   // gradient norm of the barrier objective at the last stage
  Scalar max_violation = 0.0;  // max_i f_i(x) over the raw constraints (<= 0 if feasible)
  int iterations = 0;          // Newton iterations (1 when the warm start already passes KKT)
};

struct BarrierSettings {
  Scalar mu_initial = 1.0;
  Scalar mu_final = 1e-8;
  Scalar mu_shrink = 0.1;
  Scalar newton_tol = 1e-9;  // gradient-norm stop on the final stage
  int max_newton_per_stage = 80;
  Scalar kkt_tol = 1e-7;
};

/// The convex inner problem of one CCCP iteration:
///
///   minimize  z e(w,P,u) - ln z + (v/p) sum_m (1+y_m)^p - (1/p) ln v
///   over      w, P, y
///   s.t.      ||w||^2 + ||P||^2 <= P_t
///             |g_m^H w|^2 / d_m(P) <= y_m          (linearized SINR bound)
///             q_m(w, P) >= eps_m                   (linearized harvested power)
///             y_m >= 0
///
/// where d_m is the first-order expansion of ||g_m^H P||^2 + sigma_m^2 around
/// P_ref and q_m the expansion of Q_m around (w_ref, P_ref). Both bounds are
/// tight at the reference point; d_m must be positive there.
class ConvexSubproblem {
 public:
  static ConvexSubproblem linearized_at(const EffectiveChannels& eff, const VecC& w_ref,
                                        const MatC& p_ref, const SystemConfig& cfg);

  void set_objective_weights(Scalar z, Complex u, Scalar v);

  Index n_s() const { return h_.size(); }
  Index n_eu() const { return static_cast<Index>(g_.size()); }
  Scalar power_budget() const { return power_budget_; }
  Scalar smoothing_p() const { return p_; }
  const VecC& w_ref() const { return w_ref_; }
  const MatC& p_ref() const { return p_ref_; }

  /// Linearized SINR denominator; positive whenever p is near p_ref.
  Scalar sinr_denominator(Index m, const MatC& p) const;
  /// Right-hand side of the SINR upper bound at (w, p).
  Scalar sinr_bound(Index m, const VecC& w, const MatC& p) const;
  /// Right-hand side of the harvested-power lower bound at (w, p).
  Scalar eh_bound(Index m, const VecC& w, const MatC& p) const;

  /// Full objective value at a candidate point (constants included, so this is
  /// the value traced by the outer CCCP loop).
  Scalar objective(const BeamformingSolution& sol) const;

  /// e(w, P, u) with the stored u.
  Scalar mse_value(const VecC& w, const MatC& p) const;

  friend std::pair<BeamformingSolution, SolverReport> solve_step3(
      const ConvexSubproblem& prob, const BeamformingSolution& warm, Scalar tol);

 private:
  VecC h_;                  // effective IU channel
  std::vector<VecC> g_;     // effective EU channels
  VecC w_ref_;
  MatC p_ref_;
  VecR eps_;                // per-EU harvested-power thresholds (W)
  Scalar power_budget_ = 0; // P_t (W)
  Scalar noise_iu_ = 0;
  VecR noise_eu_;
  Scalar p_ = 1.0;

  Scalar z_ = 1.0;
  Complex u_ = 0.0;
  Scalar v_ = 1.0;

  // Linearization data: alpha_m = g_m^H w_ref, beta_m(k) = g_m^H p_ref_k.
  std::vector<Complex> alpha_;
  std::vector<VecC> beta_;
  VecR d0_;  // sigma_m^2 - sum_k |beta_mk|^2
  VecR q0_;  // -|alpha_m|^2 - sum_k |beta_mk|^2
};

/// Solves the Step-3 subproblem by a log-barrier interior-point method with
/// damped Newton steps. Never returns a point whose objective exceeds the warm
/// start's; if the warm start already satisfies the KKT conditions it is
/// returned unchanged.
std::pair<BeamformingSolution, SolverReport> solve_step3(const ConvexSubproblem& prob,
                                                         const BeamformingSolution& warm,
                                                         Scalar tol = 1e-7);

/// Produces a point satisfying the power budget and every harvested-power
/// threshold, or nullopt when no such point exists. Matched-filter energy
/// beams with a 10% margin are tried first; if they exceed the budget a
/// max-min-slack restoration (linearize, maximize the worst EH slack, repeat)
/// decides feasibility.
std::optional<BeamformingSolution> find_feasible(const EffectiveChannels& eff,
                                                 const SystemConfig& cfg);

}  // namespace secswipt
