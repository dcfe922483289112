#pragma once

#include <utility>
#include <vector>

#include "secswipt/cvxcore.hpp"
#include "secswipt/metrics.hpp"

namespace secswipt {

struct CccpBcdConfig {
  int max_outer_iters = 30;      // J
  Scalar objective_tol = 1e-6;   // relative objective-change stop; 0 disables
  Scalar solver_tol = 1e-7;      // inner KKT tolerance
};

/// e(w, P, u) = |u|^2 |h^H w|^2 + |u|^2 sigma^2 + |u|^2 ||h^H P||^2 + 1
///            - 2 Re{u* h^H w}. Equals 1/(1 + SINR_I) at the minimizing u.
Scalar mse_e(const EffectiveChannels& eff, const BeamformingSolution& sol, Scalar noise_w);

/// Step-1 closed forms: z = 1/e, v = 1 / sum_m (1 + y_m)^p.
std::pair<Scalar, Scalar> update_z_v(const EffectiveChannels& eff, const BeamformingSolution& sol,
                                     const SystemConfig& cfg);

/// Step-2 closed form: u = h^H w / (|h^H w|^2 + ||h^H P||^2 + sigma^2).
Complex update_u(const EffectiveChannels& eff, const BeamformingSolution& sol, Scalar noise_w);

/// Builds the Step-3 subproblem with the SINR/EH bounds expanded at
/// (w_ref, p_ref). Objective weights (z, u, v) are set separately.
ConvexSubproblem linearize(const EffectiveChannels& eff, const VecC& w_ref, const MatC& p_ref,
                           const SystemConfig& cfg);

/// Value of the reformulated objective
///   z e(w,P,u) - ln z + (v/p) sum_m (1+y_m)^p - (1/p) ln v
/// at the solution's own auxiliaries.
Scalar reformulated_objective(const EffectiveChannels& eff, const BeamformingSolution& sol,
                              const SystemConfig& cfg);

struct ShortTermResult {
  BeamformingSolution sol;
  std::vector<Scalar> trace;  // objective after init and after each iteration
  SolveStatus status = SolveStatus::kOptimal;
  int iterations = 0;
};

/// CCCP-BCD loop: closed-form {z, v} and u updates followed by the convex
/// {w, P, y} subproblem, iterated until the objective stalls or J iterations.
/// The trace is non-increasing; every iterate keeps the power and EH
/// constraints. `init` must be feasible (see find_feasible).
ShortTermResult solve_shortterm(const EffectiveChannels& eff, const SystemConfig& cfg,
                                const CccpBcdConfig& ccfg, const BeamformingSolution& init);

}  // namespace secswipt
