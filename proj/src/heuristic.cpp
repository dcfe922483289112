#include "secswipt/heuristic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace secswipt {

Scalar weight_a(const ChannelStats& stats, int n_samples, Rng& rng) {
  if (n_samples < 1) {
    throw std::domain_error("weight_a: need at least one sample");
  }
  Scalar num = 0.0, den = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    const ChannelSample sample = stats.draw(rng);
    num += sample.h1.squaredNorm();
    Scalar acc = 0.0;
    for (const VecC& g : sample.g1) acc += g.squaredNorm();
    den += acc / static_cast<Scalar>(sample.g1.size());
  }
  if (!(den > 0.0)) {
    throw std::domain_error("weight_a: zero EU direct-link power");
  }
  return num / den;
}

StatMatrix build_a_bar(const ChannelStats& stats, Scalar a, int n_samples, Rng& rng) {
  const int n_r = stats.config().n_r;
  const int n_s = stats.config().n_s;
  StatMatrix out;
  out.a_bar = MatC::Zero(n_r + 1, n_r + 1);
  out.n_samples = n_samples;
  out.weight = a;
  MatC stacked(n_s, n_r + 1);
  for (int s = 0; s < n_samples; ++s) {
    const ChannelSample sample = stats.draw(rng);
    stacked.leftCols(n_r) = sample.f1 * sample.h2.asDiagonal();
    stacked.col(n_r) = sample.h1;
    out.a_bar -= stacked.adjoint() * stacked;
    for (std::size_t m = 0; m < sample.g1.size(); ++m) {
      stacked.leftCols(n_r) = sample.f1 * sample.g2[m].asDiagonal();
      stacked.col(n_r) = sample.g1[m];
      out.a_bar += a * (stacked.adjoint() * stacked);
    }
  }
  out.a_bar /= static_cast<Scalar>(n_samples);
  out.a_bar = Scalar(0.5) * (out.a_bar + out.a_bar.adjoint()).eval();
  return out;
}

namespace {

VecC padded_coeffs(const PhaseShifts& phases) {
  VecC phi(phases.n() + 1);
  phi.head(phases.n()) = phases.coeffs();
  phi[phases.n()] = Complex(1.0, 0.0);
  return phi;
}

Scalar quad_value(const MatC& a, const VecC& phi) {
  const VecC aphi = a * phi;
  return phi.dot(aphi).real();
}

PhaseShifts bcd_minimize(const MatC& a, const PhaseShifts& init, int max_iters, Scalar tol) {
  const Index n = init.n();
  VecC phi = padded_coeffs(init);
  Scalar prev = quad_value(a, phi);
  PhaseShifts out = init;
  for (int sweep = 0; sweep < max_iters; ++sweep) {
    for (Index i = 0; i < n; ++i) {
      const Complex c = (a.row(i) * phi).value() - a(i, i) * phi[i];
      const Scalar mag = std::abs(c);
      if (mag > 0.0) phi[i] = -c / mag;  // exact coordinate minimizer
    }
    const Scalar val = quad_value(a, phi);
    const bool done = std::abs(prev - val) <= tol * std::max(Scalar(1), std::abs(val));
    prev = val;
    if (done) break;
  }
  for (Index i = 0; i < n; ++i) {
    out.theta[i] = wrap_phase(std::arg(phi[i]));
  }
  return out;
}

PhaseShifts pdd_minimize(const MatC& a, const PhaseShifts& init, int max_iters, Scalar tol) {
  const Index n = init.n();
  const MatC a11 = a.topLeftCorner(n, n);
  const VecC a12 = a.topRightCorner(n, 1);
  VecC psi = init.coeffs();
  VecC phi = psi;
  VecC lambda = VecC::Zero(n);
  Scalar rho = 0.5 / (a11.norm() + 1.0);
  Scalar prev_gap = std::numeric_limits<Scalar>::infinity();
  for (int it = 0; it < max_iters; ++it) {
    // phi-step: (2 rho A11 + I) phi = psi - rho lambda - 2 rho a12
    MatC sys = 2.0 * rho * a11;
    sys.diagonal().array() += Complex(1.0, 0.0);
    phi = sys.ldlt().solve(psi - rho * lambda - 2.0 * rho * a12);
    // psi-step: project onto the unit circle
    for (Index i = 0; i < n; ++i) {
      const Complex target = phi[i] + rho * lambda[i];
      const Scalar mag = std::abs(target);
      psi[i] = mag > 0.0 ? target / mag : psi[i];
    }
    lambda += (phi - psi) / rho;
    const Scalar gap = (phi - psi).cwiseAbs().maxCoeff();
    if (gap < tol) break;
    if (gap > 0.9 * prev_gap) rho *= 0.6;  // tighten the penalty when stalled
    prev_gap = gap;
  }
  PhaseShifts out = init;
  for (Index i = 0; i < n; ++i) {
    out.theta[i] = wrap_phase(std::arg(psi[i]));
  }
  // Final cleanup sweep keeps the result monotone w.r.t. the BCD stationarity.
  return bcd_minimize(a, out, 2 * static_cast<int>(n), 0.0);
}

}  // namespace

Scalar unimodular_objective(const StatMatrix& mat, const PhaseShifts& phases) {
  return quad_value(mat.a_bar, padded_coeffs(phases));
}

PhaseShifts minimize_unimodular(const StatMatrix& mat, const PhaseShifts& init, int max_iters,
                                Scalar tol, UnimodularBackend backend) {
  if (mat.a_bar.rows() != init.n() + 1 || mat.a_bar.cols() != init.n() + 1) {
    throw std::invalid_argument("minimize_unimodular: matrix/phase dimension mismatch");
  }
  switch (backend) {
    case UnimodularBackend::kPdd:
      return pdd_minimize(mat.a_bar, init, max_iters, tol);
    case UnimodularBackend::kCyclicBcd:
    default:
      return bcd_minimize(mat.a_bar, init, max_iters, tol);
  }
}

}  // namespace secswipt
