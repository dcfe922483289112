#include "secswipt/scenario.hpp"

#include <cmath>

namespace secswipt {

Scalar path_loss(const PathLossModel& model, LinkKind link, Scalar distance_m) {
  if (!(distance_m > 0.0)) {
    throw std::domain_error("path_loss: distance must be positive");
  }
  const Scalar c0 = db_to_linear(model.c0_db);
  return c0 * std::pow(distance_m / model.d0_m, -model.exponent(link));
}

void SystemConfig::validate() const {
  if (n_s < 1 || n_r < 1 || m < 1) {
    throw std::invalid_argument("SystemConfig: antenna/element/user counts must be >= 1");
  }
  if (!(eps_uw > 0.0)) {
    throw std::invalid_argument("SystemConfig: eps_uw must be positive");
  }
  if (!(p_smooth > 0.0)) {
    throw std::invalid_argument("SystemConfig: p_smooth must be positive");
  }
  if (q_bits < 0) {
    throw std::invalid_argument("SystemConfig: q_bits must be >= 0");
  }
  if (!(geometry.eu_radius_m > 0.0)) {
    throw std::invalid_argument("SystemConfig: eu_radius_m must be positive");
  }
}

std::pair<int, int> upa_shape(int n_r) {
  int cols = static_cast<int>(std::sqrt(static_cast<double>(n_r)));
  while (cols > 1 && n_r % cols != 0) --cols;
  return {n_r / cols, cols};
}

namespace {

// ULA along `axis` with half-wavelength spacing, steering toward unit
// direction `dir`: entry n is exp(j pi n <axis, dir>).
VecC ula_steering(int n, const Vec3& axis, const Vec3& dir) {
  VecC a(n);
  const Scalar inner = axis.dot(dir);
  for (int i = 0; i < n; ++i) {
    a[i] = std::polar(1.0, kPi * static_cast<Scalar>(i) * inner);
  }
  return a;
}

// UPA in the y-z plane with half-wavelength spacing; element (iy, iz) sits at
// index iz * ny + iy.
VecC upa_steering(int n_r, const Vec3& dir) {
  const auto [ny, nz] = upa_shape(n_r);
  VecC a(n_r);
  const Scalar wy = dir.y();
  const Scalar wz = dir.z();
  for (int iz = 0; iz < nz; ++iz) {
    for (int iy = 0; iy < ny; ++iy) {
      a[iz * ny + iy] = std::polar(1.0, kPi * (iy * wy + iz * wz));
    }
  }
  return a;
}

Vec3 unit_dir(const Vec3& from, const Vec3& to) {
  const Vec3 d = to - from;
  const Scalar n = d.norm();
  return n > 0.0 ? Vec3(d / n) : Vec3::Zero();
}

// One Rician draw: sqrt(L) * (sqrt(K/(K+1)) los + sqrt(1/(K+1)) CN(0,1)).
// K may be +inf (pure LoS).
struct RicianMix {
  Scalar los_amp, nlos_amp;
  RicianMix(Scalar gain, Scalar k) {
    if (std::isinf(k)) {
      los_amp = std::sqrt(gain);
      nlos_amp = 0.0;
    } else {
      los_amp = std::sqrt(gain * k / (k + 1.0));
      nlos_amp = std::sqrt(gain / (k + 1.0));
    }
  }
};

VecC draw_vector_link(const VecC& los, Scalar gain, Scalar k, Rng& rng) {
  const RicianMix mix(gain, k);
  VecC out(los.size());
  for (Index i = 0; i < los.size(); ++i) {
    out[i] = mix.los_amp * los[i] + mix.nlos_amp * rng.cnormal();
  }
  return out;
}

MatC draw_matrix_link(const MatC& los, Scalar gain, Scalar k, Rng& rng) {
  const RicianMix mix(gain, k);
  MatC out(los.rows(), los.cols());
  for (Index c = 0; c < los.cols(); ++c) {
    for (Index r = 0; r < los.rows(); ++r) {
      out(r, c) = mix.los_amp * los(r, c) + mix.nlos_amp * rng.cnormal();
    }
  }
  return out;
}

}  // namespace

ChannelStats::ChannelStats(const SystemConfig& cfg, Rng& placement_rng) : cfg_(cfg) {
  cfg_.validate();
  k_bs_user_ = db_to_linear(cfg_.rician_bs_user_db);
  k_ris_ = db_to_linear(cfg_.rician_ris_db);
  eu_pos_.resize(cfg_.m);
  for (int i = 0; i < cfg_.m; ++i) {
    const Scalar ang = placement_rng.uniform() * kTwoPi;
    eu_pos_[i] = cfg_.geometry.bs_pos +
                 Vec3(cfg_.geometry.eu_radius_m * std::cos(ang),
                      cfg_.geometry.eu_radius_m * std::sin(ang), 0.0);
  }
  rebuild();
}

Vec3 ChannelStats::iu_position() const {
  return cfg_.geometry.iu_pos + Vec3(iu_offset_x_, 0.0, 0.0);
}

void ChannelStats::rebuild() {
  const Geometry& geo = cfg_.geometry;
  const Vec3 bs = geo.bs_pos;
  const Vec3 ris = geo.ris_pos;
  const Vec3 iu = iu_position();
  const Vec3 bs_axis(1.0, 0.0, 0.0);  // ULA along x

  gains_.bs_ris = path_loss(cfg_.pathloss, LinkKind::kBsRis, (ris - bs).norm());
  gains_.bs_iu = path_loss(cfg_.pathloss, LinkKind::kBsIu, (iu - bs).norm());
  gains_.ris_iu = path_loss(cfg_.pathloss, LinkKind::kRisIu, (iu - ris).norm());
  gains_.bs_eu.resize(cfg_.m);
  gains_.ris_eu.resize(cfg_.m);

  const VecC a_bs_ris = ula_steering(cfg_.n_s, bs_axis, unit_dir(bs, ris));
  const VecC a_ris_bs = upa_steering(cfg_.n_r, unit_dir(ris, bs));
  // f1.adjoint() (the BS->RIS block) has LoS a_ris_bs a_bs_ris^H.
  f1_los_ = a_bs_ris * a_ris_bs.adjoint();
  h1_los_ = ula_steering(cfg_.n_s, bs_axis, unit_dir(bs, iu));
  h2_los_ = upa_steering(cfg_.n_r, unit_dir(ris, iu));

  g1_los_.resize(cfg_.m);
  g2_los_.resize(cfg_.m);
  for (int i = 0; i < cfg_.m; ++i) {
    const Vec3& eu = eu_pos_[i];
    gains_.bs_eu[i] = path_loss(cfg_.pathloss, LinkKind::kBsEu, (eu - bs).norm());
    gains_.ris_eu[i] = path_loss(cfg_.pathloss, LinkKind::kRisEu, (eu - ris).norm());
    g1_los_[i] = ula_steering(cfg_.n_s, bs_axis, unit_dir(bs, eu));
    g2_los_[i] = upa_steering(cfg_.n_r, unit_dir(ris, eu));
  }
}

ChannelSample ChannelStats::mean() const {
  auto los_scale = [](Scalar gain, Scalar k) {
    return std::isinf(k) ? std::sqrt(gain) : std::sqrt(gain * k / (k + 1.0));
  };
  ChannelSample s;
  s.h1 = los_scale(gains_.bs_iu, k_bs_user_) * h1_los_;
  s.f1 = los_scale(gains_.bs_ris, k_ris_) * f1_los_;
  s.h2 = los_scale(gains_.ris_iu, k_ris_) * h2_los_;
  s.g1.resize(cfg_.m);
  s.g2.resize(cfg_.m);
  for (int i = 0; i < cfg_.m; ++i) {
    s.g1[i] = los_scale(gains_.bs_eu[i], k_bs_user_) * g1_los_[i];
    s.g2[i] = los_scale(gains_.ris_eu[i], k_ris_) * g2_los_[i];
  }
  s.gains = gains_;
  return s;
}

ChannelSample ChannelStats::draw(Rng& rng) const {
  ChannelSample s;
  s.h1 = draw_vector_link(h1_los_, gains_.bs_iu, k_bs_user_, rng);
  s.f1 = draw_matrix_link(f1_los_, gains_.bs_ris, k_ris_, rng);
  s.h2 = draw_vector_link(h2_los_, gains_.ris_iu, k_ris_, rng);
  s.g1.resize(cfg_.m);
  s.g2.resize(cfg_.m);
  for (int i = 0; i < cfg_.m; ++i) {
    s.g1[i] = draw_vector_link(g1_los_[i], gains_.bs_eu[i], k_bs_user_, rng);
    s.g2[i] = draw_vector_link(g2_los_[i], gains_.ris_eu[i], k_ris_, rng);
  }
  s.gains = gains_;
  return s;
}

ChannelSample draw_channel_sample(const SystemConfig& cfg, const ChannelStats& stats, Rng& rng) {
  (void)cfg;
  return stats.draw(rng);
}

EffectiveChannels effective_channels(const ChannelSample& sample, const PhaseShifts& phases) {
  const Index n_r = sample.f1.cols();
  if (phases.n() != n_r || sample.h2.size() != n_r) {
    throw std::invalid_argument("effective_channels: dimension mismatch");
  }
  const VecC phi = phases.coeffs();
  EffectiveChannels eff;
  eff.h = sample.f1 * phi.cwiseProduct(sample.h2) + sample.h1;
  eff.g.resize(sample.g1.size());
  for (std::size_t i = 0; i < sample.g1.size(); ++i) {
    if (sample.g2[i].size() != n_r) {
      throw std::invalid_argument("effective_channels: dimension mismatch");
    }
    eff.g[i] = sample.f1 * phi.cwiseProduct(sample.g2[i]) + sample.g1[i];
  }
  return eff;
}

ChannelSample delayed_sample(const ChannelSample& sample, const ChannelSample& mean,
                             Scalar delay_ms, Scalar doppler_hz) {
  if (delay_ms < 0.0) {
    throw std::domain_error("delayed_sample: delay must be >= 0");
  }
  const Scalar rho = std::cyl_bessel_j(0.0, kTwoPi * doppler_hz * delay_ms * 1e-3);
  const Scalar c = 1.0 - rho;
  ChannelSample out;
  out.h1 = rho * sample.h1 + c * mean.h1;
  out.f1 = rho * sample.f1 + c * mean.f1;
  out.h2 = rho * sample.h2 + c * mean.h2;
  out.g1.resize(sample.g1.size());
  out.g2.resize(sample.g2.size());
  for (std::size_t i = 0; i < sample.g1.size(); ++i) {
    out.g1[i] = rho * sample.g1[i] + c * mean.g1[i];
    out.g2[i] = rho * sample.g2[i] + c * mean.g2[i];
  }
  out.gains = sample.gains;
  return out;
}

ChannelSample perturbed_sample(const ChannelSample& sample, Scalar b_linear, Rng& rng) {
  if (b_linear < 0.0) {
    throw std::domain_error("perturbed_sample: b must be >= 0");
  }
  auto nudge_vec = [&](const VecC& x, Scalar link_gain) {
    const Scalar delta = std::sqrt(b_linear * link_gain);
    VecC out(x.size());
    for (Index i = 0; i < x.size(); ++i) out[i] = x[i] + delta * rng.cnormal();
    return out;
  };
  ChannelSample out;
  out.h1 = nudge_vec(sample.h1, sample.gains.bs_iu);
  {
    const Scalar delta = std::sqrt(b_linear * sample.gains.bs_ris);
    out.f1.resize(sample.f1.rows(), sample.f1.cols());
    for (Index c = 0; c < sample.f1.cols(); ++c) {
      for (Index r = 0; r < sample.f1.rows(); ++r) {
        out.f1(r, c) = sample.f1(r, c) + delta * rng.cnormal();
      }
    }
  }
  out.h2 = nudge_vec(sample.h2, sample.gains.ris_iu);
  out.g1.resize(sample.g1.size());
  out.g2.resize(sample.g2.size());
  for (std::size_t i = 0; i < sample.g1.size(); ++i) {
    out.g1[i] = nudge_vec(sample.g1[i], sample.gains.bs_eu[static_cast<Index>(i)]);
    out.g2[i] = nudge_vec(sample.g2[i], sample.gains.ris_eu[static_cast<Index>(i)]);
  }
  out.gains = sample.gains;
  return out;
}

ChannelStats move_iu(const ChannelStats& stats, Scalar x_mo_m) {
  if (x_mo_m < 0.0) {
    throw std::domain_error("move_iu: offset must be >= 0");
  }
  ChannelStats out = stats;
  out.iu_offset_x_ = x_mo_m;
  out.rebuild();
  return out;
}

}  // namespace secswipt
