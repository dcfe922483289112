#pragma once

#include <stdexcept>
#include <vector>

#include "secswipt/rng.hpp"
#include "secswipt/types.hpp"

namespace secswipt {

enum class LinkKind { kBsRis, kBsIu, kRisIu, kBsEu, kRisEu };

/// Distance-based path loss: L = C0_linear * (d / d0)^(-alpha), with a common
/// reference gain C0 and per-link exponents.
struct PathLossModel {
  Scalar c0_db = -30.0;
  Scalar d0_m = 1.0;
  Scalar alpha_bs_ris = 2.2;
  Scalar alpha_bs_user = 3.6;  // BS-IU and BS-EU direct links
  Scalar alpha_ris_user = 2.2; // RIS-IU and RIS-EU links

  Scalar exponent(LinkKind link) const {
    switch (link) {
      case LinkKind::kBsRis: return alpha_bs_ris;
      case LinkKind::kBsIu:
      case LinkKind::kBsEu: return alpha_bs_user;
      case LinkKind::kRisIu:
      case LinkKind::kRisEu: return alpha_ris_user;
    }
    return alpha_bs_user;
  }
};

Scalar path_loss(const PathLossModel& model, LinkKind link, Scalar distance_m);

struct Geometry {
  Vec3 bs_pos{6.0, 0.0, 0.0};
  Vec3 ris_pos{0.0, 2.5, 3.0};
  Vec3 iu_pos{6.0, 200.0, 0.0};
  Scalar eu_radius_m = 5.0;  // EU circle around the BS reference point, z = 0
};

/// Scenario constants. Distances in meters, powers in dBm at the interface,
/// converted once to linear watts via the *_w() accessors.
struct SystemConfig {
  int n_s = 2;   // BS antennas
  int n_r = 16;  // RIS elements
  int m = 4;     // energy users

  Scalar pt_dbm = 45.0;
  Scalar noise_iu_dbm = -80.0;
  Scalar noise_eu_dbm = -80.0;
  Scalar eps_uw = 2.0;     // per-EU minimum RF receive power
  Scalar p_smooth = 4.0;   // smoothing exponent p

  Scalar rician_bs_user_db = 0.0;  // BS-IU, BS-EU links
  Scalar rician_ris_db = 3.0;      // BS-RIS, RIS-IU, RIS-EU links

  PathLossModel pathloss;
  Geometry geometry;

  int q_bits = 0;  // phase quantization bits; 0 = continuous

  Scalar pt_w() const { return dbm_to_watt(pt_dbm); }
  Scalar noise_iu_w() const { return dbm_to_watt(noise_iu_dbm); }
  Scalar noise_eu_w() const { return dbm_to_watt(noise_eu_dbm); }
  Scalar eps_w() const { return eps_uw * 1e-6; }

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

/// Long-term RIS phase vector theta in (0, 2pi]^{N_r}; coeffs() gives the
/// unit-modulus reflection coefficients e^{j theta}.
struct PhaseShifts {
  VecR theta;

  Index n() const { return theta.size(); }
  VecC coeffs() const {
    VecC phi(theta.size());
    for (Index i = 0; i < theta.size(); ++i) {
      phi[i] = std::polar(1.0, theta[i]);
    }
    return phi;
  }
  static PhaseShifts constant(Index n, Scalar value) {
    PhaseShifts p;
    p.theta = VecR::Constant(n, value);
    return p;
  }
};

/// Wraps an angle to (0, 2pi].
inline Scalar wrap_phase(Scalar x) {
  Scalar r = x - kTwoPi * std::floor(x / kTwoPi);
  if (r <= 0.0) r += kTwoPi;  // 0 maps to 2pi
  return r;
}

/// Per-entry average power (path loss) of each link in a sample.
struct LinkGains {
  Scalar bs_iu = 0, bs_ris = 0, ris_iu = 0;
  VecR bs_eu, ris_eu;  // per EU
};

/// One realization of the full CSI set. f1 is stored N_s x N_r so that
/// f1.adjoint() is the N_r x N_s BS-to-RIS channel block.
struct ChannelSample {
  VecC h1;                  // BS-IU, length N_s
  MatC f1;                  // N_s x N_r
  VecC h2;                  // RIS-IU, length N_r
  std::vector<VecC> g1;     // BS-EU m, length N_s each
  std::vector<VecC> g2;     // RIS-EU m, length N_r each
  LinkGains gains;
};

struct EffectiveChannels {
  VecC h;               // length N_s
  std::vector<VecC> g;  // per EU, length N_s
};

/// Channel statistics fixed over a super-frame: EU placement, per-link path
/// losses and LoS components derived from the geometry.
class ChannelStats {
 public:
  ChannelStats(const SystemConfig& cfg, Rng& placement_rng);

  const SystemConfig& config() const { return cfg_; }
  const std::vector<Vec3>& eu_positions() const { return eu_pos_; }
  Vec3 iu_position() const;
  Scalar iu_offset_x() const { return iu_offset_x_; }
  const LinkGains& gains() const { return gains_; }

  /// Rician mean of every link: sqrt(L * K/(K+1)) * LoS.
  ChannelSample mean() const;

  ChannelSample draw(Rng& rng) const;

  friend ChannelStats move_iu(const ChannelStats& stats, Scalar x_mo_m);

 private:
  void rebuild();

  SystemConfig cfg_;
  Scalar iu_offset_x_ = 0.0;
  std::vector<Vec3> eu_pos_;
  Scalar k_bs_user_ = 1.0, k_ris_ = 1.0;  // linear Rician factors
  VecC h1_los_, h2_los_;
  MatC f1_los_;
  std::vector<VecC> g1_los_, g2_los_;
  LinkGains gains_;
};

/// Most-square factorization n_r = rows * cols with rows >= cols, used as the
/// RIS panel shape (y by z).
std::pair<int, int> upa_shape(int n_r);

ChannelSample draw_channel_sample(const SystemConfig& cfg, const ChannelStats& stats, Rng& rng);

/// h_eff = F1 diag(h2) phi + h1 and the analogous per-EU vectors.
EffectiveChannels effective_channels(const ChannelSample& sample, const PhaseShifts& phases);

/// Outdated-CSI model: every link becomes rho * link + (1 - rho) * mean link,
/// with rho = J0(2 pi f_d s) and s the delay in seconds.
ChannelSample delayed_sample(const ChannelSample& sample, const ChannelSample& mean,
                             Scalar delay_ms, Scalar doppler_hz);

/// Adds CN(0, b * L_link) noise per entry of every link.
ChannelSample perturbed_sample(const ChannelSample& sample, Scalar b_linear, Rng& rng);

/// Statistics with the IU displaced to (iu_x + x_mo, iu_y, iu_z); x_mo is an
/// absolute offset from the configured position, not cumulative.
ChannelStats move_iu(const ChannelStats& stats, Scalar x_mo_m);

}  // namespace secswipt
