#include "secswipt/cvxcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace secswipt {

namespace {

constexpr Scalar kInf = std::numeric_limits<Scalar>::infinity();

// Real functionals of the complex inner product t = g^H c, acting on the
// stacked real vector [Re c; Im c]: Re t = r1 . c_hat, Im t = r2 . c_hat.
struct Realified {
  VecR r1, r2;
};

Realified realify(const VecC& g) {
  const Index n = g.size();
  Realified rf;
  rf.r1.resize(2 * n);
  rf.r2.resize(2 * n);
  for (Index i = 0; i < n; ++i) {
    rf.r1[i] = g[i].real();
    rf.r1[n + i] = g[i].imag();
    rf.r2[i] = -g[i].imag();
    rf.r2[n + i] = g[i].real();
  }
  return rf;
}

VecR pack_beams(const VecC& w, const MatC& p, Index extra) {
  const Index n = w.size();
  const Index mm = p.cols();
  VecR x(2 * n * (mm + 1) + extra);
  x.setZero();
  for (Index i = 0; i < n; ++i) {
    x[i] = w[i].real();
    x[n + i] = w[i].imag();
  }
  for (Index k = 0; k < mm; ++k) {
    const Index off = 2 * n * (k + 1);
    for (Index i = 0; i < n; ++i) {
      x[off + i] = p(i, k).real();
      x[off + n + i] = p(i, k).imag();
    }
  }
  return x;
}

void unpack_beams(const VecR& x, VecC& w, MatC& p) {
  const Index n = w.size();
  const Index mm = p.cols();
  for (Index i = 0; i < n; ++i) {
    w[i] = Complex(x[i], x[n + i]);
  }
  for (Index k = 0; k < mm; ++k) {
    const Index off = 2 * n * (k + 1);
    for (Index i = 0; i < n; ++i) {
      p(i, k) = Complex(x[off + i], x[off + n + i]);
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// ConvexSubproblem
// ---------------------------------------------------------------------------

ConvexSubproblem ConvexSubproblem::linearized_at(const EffectiveChannels& eff, const VecC& w_ref,
                                                 const MatC& p_ref, const SystemConfig& cfg) {
  ConvexSubproblem prob;
  prob.h_ = eff.h;
  prob.g_ = eff.g;
  prob.w_ref_ = w_ref;
  prob.p_ref_ = p_ref;
  prob.power_budget_ = cfg.pt_w();
  prob.noise_iu_ = cfg.noise_iu_w();
  prob.noise_eu_ = VecR::Constant(static_cast<Index>(eff.g.size()), cfg.noise_eu_w());
  prob.eps_ = VecR::Constant(static_cast<Index>(eff.g.size()), cfg.eps_w());
  prob.p_ = cfg.p_smooth;

  const Index mm = prob.n_eu();
  prob.alpha_.resize(mm);
  prob.beta_.resize(mm);
  prob.d0_.resize(mm);
  prob.q0_.resize(mm);
  for (Index m = 0; m < mm; ++m) {
    const VecC& g = prob.g_[m];
    prob.alpha_[m] = g.dot(w_ref);
    prob.beta_[m] = (p_ref.adjoint() * g).conjugate();  // entries g^H p_ref_k
    const Scalar beta2 = prob.beta_[m].squaredNorm();
    prob.d0_[m] = prob.noise_eu_[m] - beta2;
    prob.q0_[m] = -std::norm(prob.alpha_[m]) - beta2;
    if (!(prob.sinr_denominator(m, p_ref) > 0.0)) {
      throw std::logic_error("ConvexSubproblem: nonpositive linearized denominator at reference");
    }
  }
  return prob;
}

void ConvexSubproblem::set_objective_weights(Scalar z, Complex u, Scalar v) {
  if (!(z > 0.0) || !(v > 0.0)) {
    throw std::invalid_argument("ConvexSubproblem: z and v must be positive");
  }
  z_ = z;
  u_ = u;
  v_ = v;
}

Scalar ConvexSubproblem::sinr_denominator(Index m, const MatC& p) const {
  const VecC& g = g_[m];
  const VecC gp = p.adjoint() * g;  // entries conj(g^H p_k)
  Scalar d = d0_[m];
  for (Index k = 0; k < gp.size(); ++k) {
    d += 2.0 * (beta_[m][k] * gp[k]).real();
  }
  return d;
}

Scalar ConvexSubproblem::sinr_bound(Index m, const VecC& w, const MatC& p) const {
  return std::norm(g_[m].dot(w)) / sinr_denominator(m, p);
}

Scalar ConvexSubproblem::eh_bound(Index m, const VecC& w, const MatC& p) const {
  const VecC& g = g_[m];
  const Complex gw = g.dot(w);
  const VecC gp = p.adjoint() * g;
  Scalar q = q0_[m] + 2.0 * (alpha_[m] * std::conj(gw)).real();
  for (Index k = 0; k < gp.size(); ++k) {
    q += 2.0 * (beta_[m][k] * gp[k]).real();
  }
  return q;
}

Scalar ConvexSubproblem::mse_value(const VecC& w, const MatC& p) const {
  const Complex t = h_.dot(w);
  const Scalar u2 = std::norm(u_);
  return u2 * std::norm(t) + u2 * noise_iu_ + u2 * (p.adjoint() * h_).squaredNorm() + 1.0 -
         2.0 * (std::conj(u_) * t).real();
}

Scalar ConvexSubproblem::objective(const BeamformingSolution& sol) const {
  Scalar acc = 0.0;
  for (Index m = 0; m < sol.y.size(); ++m) {
    acc += std::pow(1.0 + sol.y[m], p_);
  }
  return z_ * mse_value(sol.w, sol.p_mat) - std::log(z_) + (v_ / p_) * acc -
         std::log(v_) / p_;
}

// ---------------------------------------------------------------------------
// Smooth programs for the barrier core
// ---------------------------------------------------------------------------

namespace detail {

// Step-3 program over x = [Re w; Im w; Re p_1; Im p_1; ...; y], constraints
// scaled to O(1) at the reference point.
class Step3Program {
 public:
  explicit Step3Program(const ConvexSubproblem& prob)
      : pr_(prob), n_(prob.n_s()), mm_(prob.n_eu()) {
    yoff_ = 2 * n_ * (mm_ + 1);
    dim_ = yoff_ + mm_;
    rh_ = realify(pr_.h_);
    const Scalar z = pr_.z_;
    const Complex u = pr_.u_;
    c_quad_ = z * std::norm(u);
    lin_w_ = 2.0 * z * (u.real() * rh_.r1 + u.imag() * rh_.r2);
    block_hess_ = 2.0 * c_quad_ *
                  (rh_.r1 * rh_.r1.transpose() + rh_.r2 * rh_.r2.transpose());
    const0_ = z * (std::norm(u) * pr_.noise_iu_ + 1.0) - std::log(z) -
              std::log(pr_.v_) / pr_.p_;

    rg_.resize(mm_);
    gouter_.resize(mm_);
    lin_d_.resize(mm_);
    lin_qw_.resize(mm_);
    sc_sinr_.resize(mm_);
    sc_eh_.resize(mm_);
    for (Index m = 0; m < mm_; ++m) {
      rg_[m] = realify(pr_.g_[m]);
      gouter_[m] = rg_[m].r1 * rg_[m].r1.transpose() + rg_[m].r2 * rg_[m].r2.transpose();
      lin_d_[m].resize(mm_);
      for (Index k = 0; k < mm_; ++k) {
        const Complex b = pr_.beta_[m][k];
        lin_d_[m][k] = 2.0 * (b.real() * rg_[m].r1 + b.imag() * rg_[m].r2);
      }
      const Complex a = pr_.alpha_[m];
      lin_qw_[m] = 2.0 * (a.real() * rg_[m].r1 + a.imag() * rg_[m].r2);
      sc_sinr_[m] = 1.0 + pr_.sinr_bound(m, pr_.w_ref_, pr_.p_ref_);
      sc_eh_[m] = std::max({pr_.eps_[m], pr_.eh_bound(m, pr_.w_ref_, pr_.p_ref_), 1e-12});
    }
  }

  Index dim() const { return dim_; }
  int num_constraints() const { return static_cast<int>(3 * mm_ + 1); }

  Scalar objective(const VecR& x, VecR* grad, MatR* hess) const {
    if (grad) grad->setZero(dim_);
    if (hess) hess->setZero(dim_, dim_);
    Scalar val = const0_;
    for (Index b = 0; b <= mm_; ++b) {
      const Index off = 2 * n_ * b;
      const auto seg = x.segment(off, 2 * n_);
      const Scalar tr = rh_.r1.dot(seg);
      const Scalar ti = rh_.r2.dot(seg);
      val += c_quad_ * (tr * tr + ti * ti);
      if (grad) {
        grad->segment(off, 2 * n_) = 2.0 * c_quad_ * (tr * rh_.r1 + ti * rh_.r2);
      }
      if (hess) {
        hess->block(off, off, 2 * n_, 2 * n_) = block_hess_;
      }
    }
    val -= lin_w_.dot(x.head(2 * n_));
    if (grad) grad->head(2 * n_) -= lin_w_;
    const Scalar p = pr_.p_;
    const Scalar v = pr_.v_;
    for (Index m = 0; m < mm_; ++m) {
      const Scalar t = 1.0 + x[yoff_ + m];
      val += (v / p) * std::pow(t, p);
      if (grad) (*grad)[yoff_ + m] = v * std::pow(t, p - 1.0);
      if (hess) (*hess)(yoff_ + m, yoff_ + m) = v * (p - 1.0) * std::pow(t, p - 2.0);
    }
    return val;
  }

  Scalar constraint(int idx, const VecR& x, VecR* grad, MatR* hess) const {
    if (grad) grad->setZero(dim_);
    if (hess) hess->setZero(dim_, dim_);
    if (idx == 0) {  // power budget
      const Scalar ip = 1.0 / pr_.power_budget_;
      const auto beams = x.head(yoff_);
      if (grad) grad->head(yoff_) = 2.0 * ip * beams;
      if (hess) hess->diagonal().head(yoff_).setConstant(2.0 * ip);
      return beams.squaredNorm() * ip - 1.0;
    }
    if (idx <= mm_) {  // SINR upper bound <= y_m
      const Index m = idx - 1;
      const Scalar isc = 1.0 / sc_sinr_[m];
      const auto wseg = x.head(2 * n_);
      const Scalar tr = rg_[m].r1.dot(wseg);
      const Scalar ti = rg_[m].r2.dot(wseg);
      const Scalar s = tr * tr + ti * ti;
      Scalar d = pr_.d0_[m];
      for (Index k = 0; k < mm_; ++k) {
        d += lin_d_[m][k].dot(x.segment(2 * n_ * (k + 1), 2 * n_));
      }
      if (!(d > 0.0)) return kInf;  // outside the domain of the bound
      const Scalar val = (s / d - x[yoff_ + m]) * isc;
      if (grad) {
        const VecR ds = 2.0 * (tr * rg_[m].r1 + ti * rg_[m].r2);
        grad->head(2 * n_) = (isc / d) * ds;
        for (Index k = 0; k < mm_; ++k) {
          grad->segment(2 * n_ * (k + 1), 2 * n_) = (-isc * s / (d * d)) * lin_d_[m][k];
        }
        (*grad)[yoff_ + m] = -isc;
        if (hess) {
          hess->block(0, 0, 2 * n_, 2 * n_) = (2.0 * isc / d) * gouter_[m];
          const VecR cross = (-isc / (d * d)) * ds;
          for (Index k = 0; k < mm_; ++k) {
            const Index ok = 2 * n_ * (k + 1);
            hess->block(0, ok, 2 * n_, 2 * n_) = cross * lin_d_[m][k].transpose();
            hess->block(ok, 0, 2 * n_, 2 * n_) =
                hess->block(0, ok, 2 * n_, 2 * n_).transpose();
            for (Index l = 0; l < mm_; ++l) {
              hess->block(ok, 2 * n_ * (l + 1), 2 * n_, 2 * n_) +=
                  (2.0 * isc * s / (d * d * d)) * lin_d_[m][k] * lin_d_[m][l].transpose();
            }
          }
        }
      }
      return val;
    }
    if (idx <= 2 * mm_) {  // harvested power >= eps_m (affine)
      const Index m = idx - mm_ - 1;
      const Scalar ise = 1.0 / sc_eh_[m];
      Scalar q = pr_.q0_[m] + lin_qw_[m].dot(x.head(2 * n_));
      for (Index k = 0; k < mm_; ++k) {
        q += lin_d_[m][k].dot(x.segment(2 * n_ * (k + 1), 2 * n_));
      }
      if (grad) {
        grad->head(2 * n_) = -ise * lin_qw_[m];
        for (Index k = 0; k < mm_; ++k) {
          grad->segment(2 * n_ * (k + 1), 2 * n_) = -ise * lin_d_[m][k];
        }
      }
      return (pr_.eps_[m] - q) * ise;
    }
    // y_m >= 0
    const Index m = idx - 2 * mm_ - 1;
    const Scalar isc = 1.0 / sc_sinr_[m];
    if (grad) (*grad)[yoff_ + m] = -isc;
    return -x[yoff_ + m] * isc;
  }

 private:
  const ConvexSubproblem& pr_;
  Index n_, mm_, yoff_ = 0, dim_ = 0;
  Realified rh_;
  std::vector<Realified> rg_;
  std::vector<MatR> gouter_;
  std::vector<std::vector<VecR>> lin_d_;
  std::vector<VecR> lin_qw_;
  VecR sc_sinr_, sc_eh_;
  Scalar c_quad_ = 0, const0_ = 0;
  VecR lin_w_;
  MatR block_hess_;
};

// Max-min EH slack program over [beams; t]: minimize -t subject to the power
// budget and eps_m + t <= q_m(w, P) with q_m linearized at the reference.
class SlackProgram {
 public:
  SlackProgram(const ConvexSubproblem& prob, Scalar t_scale)
      : pr_(prob), n_(prob.n_s()), mm_(prob.n_eu()), tscale_(t_scale) {
    toff_ = 2 * n_ * (mm_ + 1);
    dim_ = toff_ + 1;
    rg_.resize(mm_);
    lin_d_.resize(mm_);
    lin_qw_.resize(mm_);
    sc_.resize(mm_);
    for (Index m = 0; m < mm_; ++m) {
      rg_[m] = realify(pr_.g_[m]);
      lin_d_[m].resize(mm_);
      for (Index k = 0; k < mm_; ++k) {
        const Complex b = pr_.beta_[m][k];
        lin_d_[m][k] = 2.0 * (b.real() * rg_[m].r1 + b.imag() * rg_[m].r2);
      }
      const Complex a = pr_.alpha_[m];
      lin_qw_[m] = 2.0 * (a.real() * rg_[m].r1 + a.imag() * rg_[m].r2);
      sc_[m] = std::max({pr_.eps_[m], std::abs(pr_.eh_bound(m, pr_.w_ref_, pr_.p_ref_)),
                         tscale_});
    }
  }

  Index dim() const { return dim_; }
  int num_constraints() const { return static_cast<int>(mm_ + 1); }

  Scalar objective(const VecR& x, VecR* grad, MatR* hess) const {
    if (grad) {
      grad->setZero(dim_);
      (*grad)[toff_] = -1.0 / tscale_;
    }
    if (hess) hess->setZero(dim_, dim_);
    return -x[toff_] / tscale_;
  }

  Scalar constraint(int idx, const VecR& x, VecR* grad, MatR* hess) const {
    if (grad) grad->setZero(dim_);
    if (hess) hess->setZero(dim_, dim_);
    if (idx == 0) {
      const Scalar ip = 1.0 / pr_.power_budget_;
      const auto beams = x.head(toff_);
      if (grad) grad->head(toff_) = 2.0 * ip * beams;
      if (hess) hess->diagonal().head(toff_).setConstant(2.0 * ip);
      return beams.squaredNorm() * ip - 1.0;
    }
    const Index m = idx - 1;
    const Scalar ise = 1.0 / sc_[m];
    Scalar q = pr_.q0_[m] + lin_qw_[m].dot(x.head(2 * n_));
    for (Index k = 0; k < mm_; ++k) {
      q += lin_d_[m][k].dot(x.segment(2 * n_ * (k + 1), 2 * n_));
    }
    if (grad) {
      grad->head(2 * n_) = -ise * lin_qw_[m];
      for (Index k = 0; k < mm_; ++k) {
        grad->segment(2 * n_ * (k + 1), 2 * n_) = -ise * lin_d_[m][k];
      }
      (*grad)[toff_] = ise;
    }
    return (pr_.eps_[m] + x[toff_] - q) * ise;
  }

 private:
  const ConvexSubproblem& pr_;
  Index n_, mm_, toff_ = 0, dim_ = 0;
  Scalar tscale_;
  std::vector<Realified> rg_;
  std::vector<std::vector<VecR>> lin_d_;
  std::vector<VecR> lin_qw_;
  VecR sc_;
};

struct BarrierResult {
  VecR x;
  Scalar stationarity = kInf;
  int newton_iters = 0;
  bool ok = false;
};

VecR newton_direction(MatR h, const VecR& g) {
  const Scalar base = 1.0 + h.diagonal().cwiseAbs().maxCoeff();
  Scalar ridge = 0.0;
  for (int attempt = 0; attempt < 8; ++attempt) {
    MatR hr = h;
    if (ridge > 0.0) hr.diagonal().array() += ridge;
    Eigen::LDLT<MatR> ldlt(hr);
    if (ldlt.info() == Eigen::Success) {
      VecR d = ldlt.solve(-g);
      if (d.allFinite() && g.dot(d) < 0.0) return d;
    }
    ridge = (ridge == 0.0) ? 1e-12 * base : ridge * 100.0;
  }
  return -g;  // steepest-descent fallback
}

// Minimizes obj(x) - mu sum log(shift_i - f_i(x)) over decreasing mu. The
// shifts relax constraints that are numerically tight at the start point and
// decay to zero with mu.
template <class Prog>
BarrierResult run_barrier(const Prog& prog, VecR x, const BarrierSettings& bs, VecR shifts) {
  const Index dd = prog.dim();
  const int mcon = prog.num_constraints();
  if (shifts.size() == 0) shifts = VecR::Zero(mcon);
  BarrierResult out;
  VecR g(dd), cg(dd);
  MatR h(dd, dd), ch(dd, dd);

  auto barrier_value = [&](const VecR& xx, Scalar mu) -> Scalar {
    Scalar val = prog.objective(xx, nullptr, nullptr);
    for (int i = 0; i < mcon; ++i) {
      const Scalar margin = shifts[i] - prog.constraint(i, xx, nullptr, nullptr);
      if (!(margin > 0.0)) return kInf;
      val -= mu * std::log(margin);
    }
    return val;
  };

  Scalar mu = bs.mu_initial;
  while (true) {
    const bool last = mu <= bs.mu_final * (1.0 + 1e-12);
    const Scalar tol = last ? bs.newton_tol : std::max(bs.newton_tol, 1e-3 * mu);
    Scalar gnorm = kInf;
    for (int it = 0; it < bs.max_newton_per_stage; ++it) {
      Scalar val = prog.objective(x, &g, &h);
      bool in_domain = true;
      for (int i = 0; i < mcon; ++i) {
        const Scalar ci = prog.constraint(i, x, &cg, &ch);
        const Scalar margin = shifts[i] - ci;
        if (!(margin > 0.0)) {
          in_domain = false;
          break;
        }
        const Scalar w1 = mu / margin;
        val -= mu * std::log(margin);
        g += w1 * cg;
        h += w1 * ch + (w1 / margin) * (cg * cg.transpose());
      }
      if (!in_domain) return out;  // start point violated a constraint
      gnorm = g.norm();
      if (gnorm <= tol) break;
      const VecR dir = newton_direction(h, g);
      const Scalar gd = g.dot(dir);
      if (!(gd < 0.0)) break;
      Scalar alpha = 1.0;
      bool accepted = false;
      for (int bt = 0; bt < 60; ++bt) {
        const VecR xt = x + alpha * dir;
        const Scalar vt = barrier_value(xt, mu);
        if (vt <= val + 1e-4 * alpha * gd) {
          x = xt;
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      ++out.newton_iters;
      if (!accepted) break;
    }
    if (last) {
      out.stationarity = gnorm;
      break;
    }
    mu = std::max(mu * bs.mu_shrink, bs.mu_final);
    for (int i = 0; i < mcon; ++i) {
      shifts[i] *= bs.mu_shrink;
      if (shifts[i] < 1e-250) shifts[i] = 0.0;
    }
  }
  out.x = std::move(x);
  out.ok = true;
  return out;
}

// Lawson-Hanson style nonnegative least squares: min ||A y + b||, y >= 0.
VecR nnls(const MatR& a, const VecR& b) {
  const Index cols = a.cols();
  VecR y = VecR::Zero(cols);
  std::vector<bool> passive(static_cast<std::size_t>(cols), false);
  const Scalar tol = 1e-12 * (1.0 + b.norm());
  for (int outer = 0; outer < 3 * static_cast<int>(cols) + 10; ++outer) {
    const VecR r = a * y + b;
    const VecR w = a.transpose() * r;
    Index best = -1;
    Scalar wmin = -tol;
    for (Index j = 0; j < cols; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && w[j] < wmin) {
        wmin = w[j];
        best = j;
      }
    }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;
    for (int inner = 0; inner < 2 * static_cast<int>(cols) + 5; ++inner) {
      std::vector<Index> idx;
      for (Index j = 0; j < cols; ++j) {
        if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
      }
      if (idx.empty()) break;
      MatR ap(a.rows(), static_cast<Index>(idx.size()));
      for (std::size_t j = 0; j < idx.size(); ++j) ap.col(static_cast<Index>(j)) = a.col(idx[j]);
      const VecR zp = ap.colPivHouseholderQr().solve(-b);
      bool all_pos = true;
      for (Index j = 0; j < zp.size(); ++j) {
        if (zp[j] <= 0.0) all_pos = false;
      }
      if (all_pos) {
        y.setZero();
        for (std::size_t j = 0; j < idx.size(); ++j) y[idx[j]] = zp[static_cast<Index>(j)];
        break;
      }
      Scalar alpha = 1.0;
      for (std::size_t j = 0; j < idx.size(); ++j) {
        const Scalar yj = y[idx[j]];
        const Scalar zj = zp[static_cast<Index>(j)];
        if (zj <= 0.0 && yj - zj > 0.0) alpha = std::min(alpha, yj / (yj - zj));
      }
      for (std::size_t j = 0; j < idx.size(); ++j) {
        y[idx[j]] += alpha * (zp[static_cast<Index>(j)] - y[idx[j]]);
        if (y[idx[j]] <= 1e-14) {
          y[idx[j]] = 0.0;
          passive[static_cast<std::size_t>(idx[j])] = false;
        }
      }
    }
  }
  return y;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// solve_step3
// ---------------------------------------------------------------------------

std::pair<BeamformingSolution, SolverReport> solve_step3(const ConvexSubproblem& prob,
                                                         const BeamformingSolution& warm,
                                                         Scalar tol) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("solve_step3: tolerance must be positive");
  }
  const Index n = prob.n_s();
  const Index mm = prob.n_eu();
  if (warm.w.size() != n || warm.p_mat.cols() != mm || warm.y.size() != mm) {
    throw std::invalid_argument("solve_step3: warm start has wrong dimensions");
  }
  detail::Step3Program pg(prob);
  const Index dd = pg.dim();
  const int mcon = pg.num_constraints();
  const Index yoff = 2 * n * (mm + 1);

  // Start point: warm beams, y lifted just above the SINR bounds so the SINR
  // and nonnegativity constraints hold strictly.
  VecR x0 = pack_beams(warm.w, warm.p_mat, mm);
  for (Index m = 0; m < mm; ++m) {
    const Scalar bound = prob.sinr_bound(m, warm.w, warm.p_mat);
    Scalar ym = std::max(warm.y[m], bound);
    ym += 1e-9 * (1.0 + ym);
    x0[yoff + m] = ym;
  }

  // Margins at the start; power/EH may be numerically tight, which the barrier
  // absorbs with decaying constraint shifts.
  VecR shifts = VecR::Zero(mcon);
  for (int i = 0; i < mcon; ++i) {
    const Scalar ci = pg.constraint(i, x0, nullptr, nullptr);
    if (ci > 1e-7) {
      throw std::invalid_argument("solve_step3: warm start violates a constraint");
    }
    if (ci > -1e-12) shifts[i] = ci + 1e-12;
  }

  const Scalar warm_objective = prob.objective(warm);
  SolverReport report;

  // KKT screen: if the warm point is already stationary, return it unchanged.
  {
    VecR g0(dd), cg(dd);
    pg.objective(x0, &g0, nullptr);
    std::vector<VecR> active_grads;
    for (int i = 0; i < mcon; ++i) {
      const Scalar ci = pg.constraint(i, x0, &cg, nullptr);
      if (ci >= -1e-6) active_grads.push_back(cg);
    }
    Scalar residual = g0.norm();
    if (!active_grads.empty()) {
      MatR a(dd, static_cast<Index>(active_grads.size()));
      for (std::size_t j = 0; j < active_grads.size(); ++j) {
        a.col(static_cast<Index>(j)) = active_grads[j];
      }
      const VecR lambda = detail::nnls(a, g0);
      residual = (g0 + a * lambda).norm();
    }
    if (residual <= std::min(tol, 1e-7) * (1.0 + g0.norm())) {
      report.status = SolveStatus::kOptimal;
      report.objective = warm_objective;
      report.stationarity = residual;
      report.iterations = 1;
      return {warm, report};
    }
  }

  BarrierSettings bs;
  bs.kkt_tol = tol;
  detail::BarrierResult br = detail::run_barrier(pg, x0, bs, shifts);
  report.iterations = br.newton_iters + 1;

  // Auxiliaries (z, u, v) are owned by the outer loop and pass through.
  BeamformingSolution out = warm;
  if (br.ok) {
    unpack_beams(br.x, out.w, out.p_mat);
    for (Index m = 0; m < mm; ++m) out.y[m] = br.x[yoff + m];
  }
  Scalar candidate_objective = br.ok ? prob.objective(out) : kInf;

  if (!br.ok || !(candidate_objective <= warm_objective)) {
    // Never worsen the warm start.
    out = warm;
    candidate_objective = warm_objective;
  }

  Scalar viol = 0.0;
  {
    VecR xf = pack_beams(out.w, out.p_mat, mm);
    for (Index m = 0; m < mm; ++m) xf[yoff + m] = out.y[m];
    for (int i = 0; i < mcon; ++i) {
      viol = std::max(viol, pg.constraint(i, xf, nullptr, nullptr));
    }
  }
  report.objective = candidate_objective;
  report.stationarity = br.stationarity;
  report.max_violation = viol;
  report.status = (br.ok && br.stationarity <= std::max(tol, 1e-7) && viol <= 1e-6)
                      ? SolveStatus::kOptimal
                      : SolveStatus::kMaxIter;
  return {out, report};
}

// ---------------------------------------------------------------------------
// find_feasible
// ---------------------------------------------------------------------------

namespace {

void fill_auxiliaries(const EffectiveChannels& eff, const SystemConfig& cfg,
                      BeamformingSolution& sol) {
  const Index mm = static_cast<Index>(eff.g.size());
  sol.y.resize(mm);
  for (Index m = 0; m < mm; ++m) {
    sol.y[m] = sinr_eu(eff, sol, m, cfg.noise_eu_w());
  }
  const Complex t = eff.h.dot(sol.w);
  const Scalar den = std::norm(t) + (sol.p_mat.adjoint() * eff.h).squaredNorm() +
                     cfg.noise_iu_w();
  sol.u = t / den;
  const Scalar u2 = std::norm(sol.u);
  const Scalar e = u2 * std::norm(t) + u2 * cfg.noise_iu_w() +
                   u2 * (sol.p_mat.adjoint() * eff.h).squaredNorm() + 1.0 -
                   2.0 * (std::conj(sol.u) * t).real();
  sol.z = 1.0 / e;
  Scalar acc = 0.0;
  for (Index m = 0; m < mm; ++m) acc += std::pow(1.0 + sol.y[m], cfg.p_smooth);
  sol.v = 1.0 / acc;
}

}  // namespace

std::optional<BeamformingSolution> find_feasible(const EffectiveChannels& eff,
                                                 const SystemConfig& cfg) {
  const Index n = eff.h.size();
  const Index mm = static_cast<Index>(eff.g.size());
  const Scalar pt = cfg.pt_w();
  const Scalar eps = cfg.eps_w();

  // Q_m <= ||g_m||^2 (||w||^2 + ||P||^2) bounds each EU's receivable power.
  for (Index m = 0; m < mm; ++m) {
    const Scalar cap = pt * eff.g[m].squaredNorm();
    if (eps > cap * (1.0 + 1e-12)) return std::nullopt;
  }

  BeamformingSolution sol = BeamformingSolution::zeros(n, mm);

  // Matched-filter energy beams with a 10% margin, remaining power to w.
  Scalar power_e = 0.0;
  for (Index m = 0; m < mm; ++m) {
    if (eps <= 0.0) continue;
    const Scalar g2 = eff.g[m].squaredNorm();
    const Scalar amp = std::sqrt(1.1 * eps) / g2;
    sol.p_mat.col(m) = amp * eff.g[m];
    power_e += 1.1 * eps / g2;
  }
  if (power_e <= pt) {
    const Scalar hn = eff.h.norm();
    if (hn > 0.0) {
      sol.w = std::sqrt(pt - power_e) / hn * eff.h;
    }
    fill_auxiliaries(eff, cfg, sol);
    return sol;
  }

  // Budget exceeded: maximize the worst EH slack by repeated linearization.
  const Scalar shrink = std::sqrt(0.999 * pt / power_e);
  sol.p_mat *= shrink;
  sol.w.setZero();
  Scalar t_best = -kInf;
  for (int round = 0; round < 15; ++round) {
    ConvexSubproblem lin = ConvexSubproblem::linearized_at(eff, sol.w, sol.p_mat, cfg);
    detail::SlackProgram sp(lin, std::max(eps, 1e-12));
    VecR x0 = pack_beams(sol.w, sol.p_mat, 1);
    Scalar margin = kInf;
    for (Index m = 0; m < mm; ++m) {
      margin = std::min(margin, lin.eh_bound(m, sol.w, sol.p_mat) - eps);
    }
    x0[sp.dim() - 1] = margin - std::max(1e-3 * std::abs(margin), 1e-9 * std::max(eps, 1e-12));
    BarrierSettings bs;
    detail::BarrierResult br = detail::run_barrier(sp, x0, bs, VecR());
    if (!br.ok) break;
    unpack_beams(br.x, sol.w, sol.p_mat);
    const Scalar t_now = br.x[sp.dim() - 1];
    if (t_now <= t_best + 1e-12 * std::max(1.0, std::abs(t_best))) {
      t_best = std::max(t_best, t_now);
      break;
    }
    t_best = t_now;
    if (t_best > 0.1 * eps) break;  // comfortably feasible already
  }
  if (!(t_best >= 0.0)) return std::nullopt;
  for (Index m = 0; m < mm; ++m) {
    if (harvested_power(eff, sol, m) < eps * (1.0 - 1e-9)) return std::nullopt;
  }
  fill_auxiliaries(eff, cfg, sol);
  return sol;
}

}  // namespace secswipt
