#include "secswipt/shortterm.hpp"

#include <cmath>
#include <stdexcept>

namespace secswipt {

Scalar mse_e(const EffectiveChannels& eff, const BeamformingSolution& sol, Scalar noise_w) {
  const Complex t = eff.h.dot(sol.w);
  const Scalar u2 = std::norm(sol.u);
  return u2 * std::norm(t) + u2 * noise_w + u2 * (sol.p_mat.adjoint() * eff.h).squaredNorm() +
         1.0 - 2.0 * (std::conj(sol.u) * t).real();
}

std::pair<Scalar, Scalar> update_z_v(const EffectiveChannels& eff, const BeamformingSolution& sol,
                                     const SystemConfig& cfg) {
  const Scalar e = mse_e(eff, sol, cfg.noise_iu_w());
  if (!(e > 0.0)) {
    throw std::domain_error("update_z_v: nonpositive mse value");
  }
  Scalar acc = 0.0;
  for (Index m = 0; m < sol.y.size(); ++m) {
    acc += std::pow(1.0 + sol.y[m], cfg.p_smooth);
  }
  return {1.0 / e, 1.0 / acc};
}

Complex update_u(const EffectiveChannels& eff, const BeamformingSolution& sol, Scalar noise_w) {
  if (!(noise_w > 0.0)) {
    throw std::domain_error("update_u: noise power must be positive");
  }
  const Complex t = eff.h.dot(sol.w);
  return t / (std::norm(t) + (sol.p_mat.adjoint() * eff.h).squaredNorm() + noise_w);
}

ConvexSubproblem linearize(const EffectiveChannels& eff, const VecC& w_ref, const MatC& p_ref,
                           const SystemConfig& cfg) {
  return ConvexSubproblem::linearized_at(eff, w_ref, p_ref, cfg);
}

Scalar reformulated_objective(const EffectiveChannels& eff, const BeamformingSolution& sol,
                              const SystemConfig& cfg) {
  const Scalar e = mse_e(eff, sol, cfg.noise_iu_w());
  Scalar acc = 0.0;
  for (Index m = 0; m < sol.y.size(); ++m) {
    acc += std::pow(1.0 + sol.y[m], cfg.p_smooth);
  }
  const Scalar p = cfg.p_smooth;
  return sol.z * e - std::log(sol.z) + (sol.v / p) * acc - std::log(sol.v) / p;
}

namespace {

constexpr Scalar kFeasSlack = 1e-6;

bool is_feasible(const EffectiveChannels& eff, const BeamformingSolution& sol,
                 const SystemConfig& cfg) {
  if (sol.total_power() > cfg.pt_w() * (1.0 + kFeasSlack) + kFeasSlack) return false;
  for (Index m = 0; m < static_cast<Index>(eff.g.size()); ++m) {
    if (harvested_power(eff, sol, m) < cfg.eps_w() * (1.0 - kFeasSlack) - kFeasSlack) {
      return false;
    }
  }
  return true;
}

}  // namespace

ShortTermResult solve_shortterm(const EffectiveChannels& eff, const SystemConfig& cfg,
                                const CccpBcdConfig& ccfg, const BeamformingSolution& init) {
  if (ccfg.max_outer_iters < 1) {
    throw std::invalid_argument("solve_shortterm: J must be >= 1");
  }
  if (!is_feasible(eff, init, cfg)) {
    throw std::invalid_argument("solve_shortterm: infeasible initial point");
  }

  ShortTermResult res;
  res.sol = init;
  if (res.sol.y.size() != static_cast<Index>(eff.g.size())) {
    res.sol.y.resize(static_cast<Index>(eff.g.size()));
  }
  // y_m starts at the exact eavesdropper SINR: feasible and tight.
  for (Index m = 0; m < res.sol.y.size(); ++m) {
    res.sol.y[m] = sinr_eu(eff, res.sol, m, cfg.noise_eu_w());
  }

  res.trace.push_back(reformulated_objective(eff, res.sol, cfg));
  for (int iter = 0; iter < ccfg.max_outer_iters; ++iter) {
    auto [z, v] = update_z_v(eff, res.sol, cfg);
    res.sol.z = z;
    res.sol.v = v;
    res.sol.u = update_u(eff, res.sol, cfg.noise_iu_w());

    ConvexSubproblem prob = linearize(eff, res.sol.w, res.sol.p_mat, cfg);
    prob.set_objective_weights(res.sol.z, res.sol.u, res.sol.v);
    auto [next, report] = solve_step3(prob, res.sol, ccfg.solver_tol);
    res.sol = next;
    if (report.status == SolveStatus::kInfeasible) {
      res.status = SolveStatus::kInfeasible;
      break;
    }

    const Scalar obj = reformulated_objective(eff, res.sol, cfg);
    const Scalar prev = res.trace.back();
    res.trace.push_back(obj);
    res.iterations = iter + 1;
    if (ccfg.objective_tol > 0.0 &&
        std::abs(prev - obj) <= ccfg.objective_tol * std::max(Scalar(1), std::abs(obj))) {
      break;
    }
  }
  return res;
}

}  // namespace secswipt
