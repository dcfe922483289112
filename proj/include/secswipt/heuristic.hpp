#pragma once

#include "secswipt/scenario.hpp"

namespace secswipt {

/// Sample-average estimate of A = E{ -Hb^H Hb + a sum_m Gb_m^H Gb_m } with
/// Hb = [F1 diag(h2), h1] and Gb_m = [F1 diag(g2m), g1m]. For a unit-modulus
/// phi_bar = [phi; 1], phi_bar^H A phi_bar is the sampled average of
/// -||h_eff||^2 + a sum_m ||g_eff_m||^2.
struct StatMatrix {
  MatC a_bar;  // (N_r + 1) x (N_r + 1), Hermitian
  int n_samples = 0;
  Scalar weight = 0.0;
};

/// Weighting factor a = E||h1||^2 / E{(1/M) sum_m ||g1m||^2}, estimated from
/// n_samples draws.
Scalar weight_a(const ChannelStats& stats, int n_samples, Rng& rng);

StatMatrix build_a_bar(const ChannelStats& stats, Scalar a, int n_samples, Rng& rng);

enum class UnimodularBackend { kCyclicBcd, kPdd };

/// Minimizes phi_bar^H A phi_bar over unit-modulus phases (last entry pinned
/// to 1). The default backend sweeps coordinates with the exact per-element
/// minimizer phi_n = -c_n / |c_n|; the PDD backend splits the unit-modulus
/// constraint off with an augmented Lagrangian.
PhaseShifts minimize_unimodular(const StatMatrix& mat, const PhaseShifts& init,
                                int max_iters = 200, Scalar tol = 1e-10,
                                UnimodularBackend backend = UnimodularBackend::kCyclicBcd);

/// phi_bar^H A phi_bar for phases theta (diagnostic / test hook).
Scalar unimodular_objective(const StatMatrix& mat, const PhaseShifts& phases);

}  // namespace secswipt
