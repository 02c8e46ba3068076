/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "maxmin_beam/sdp_relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "maxmin_beam/errors.hpp"

namespace maxmin_beam {

double PhaseBox::max_width() const {
  double w = 0.0;
  for (int n = 0; n < size(); ++n) w = std::max(w, width(n));
  return w;
}

bool PhaseBox::contains(std::span<const double> theta, double slack) const {
  if (static_cast<int>(theta.size()) != size()) return false;
  for (int n = 0; n < size(); ++n) {
    const double t = theta[static_cast<std::size_t>(n)];
    if (t < lo[static_cast<std::size_t>(n)] - slack || t > hi[static_cast<std::size_t>(n)] + slack) {
      return false;
    }
  }
  return true;
}

void PhaseBox::validate() const {
  if (lo.size() != hi.size() || lo.empty()) throw DimensionError("PhaseBox: lo/hi size mismatch");
  for (int n = 0; n < size(); ++n) {
    const double l = lo[static_cast<std::size_t>(n)];
    const double h = hi[static_cast<std::size_t>(n)];
    if (!(l >= 0.0) || !(l <= h) || !(h <= kTwoPi)) {
      throw ContractError("PhaseBox: need 0 <= lo <= hi <= 2pi");
    }
  }
}

SectorConstraint sector_constraint(double lo, double hi) {
  const double width = hi - lo;
  if (!(width >= 0.0) || width > kPi * (1.0 + 1e-12)) {
    throw ContractError("sector_constraint: interval width must lie in [0, pi]");
  }
  return {0.5 * (lo + hi), std::cos(0.5 * width)};
}

bool schur_snr_constraint(double t, double g) { return t >= 0.0 && g >= 0.0 && t * g >= 1.0; }

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// The relaxation over the free coordinates: W is n x n Hermitian with unit
// diagonal, parametrized by x_pq + j y_pq for p < q.
class ReducedRelaxation {
 public:
  ReducedRelaxation(std::vector<ComplexVector> a, std::vector<SectorConstraint> sectors)
      : a_(std::move(a)), sectors_(std::move(sectors)) {
    n_ = static_cast<int>(a_.front().size());
    for (int p = 0; p < n_; ++p) {
      for (int q = p + 1; q < n_; ++q) pairs_.push_back({p, q});
    }
    dim_ = 2 * static_cast<int>(pairs_.size());
    // g_k = base_k + grad_k . params
    for (const auto& ak : a_) {
      base_.push_back(ak.squaredNorm());
      VectorXd grad(dim_);
      for (std::size_t i = 0; i < pairs_.size(); ++i) {
        const auto [p, q] = pairs_[i];
        const Complex b = ak(p) * std::conj(ak(q));
        grad(static_cast<Eigen::Index>(2 * i)) = 2.0 * b.real();
        grad(static_cast<Eigen::Index>(2 * i + 1)) = 2.0 * b.imag();
      }
      g_grad_.push_back(std::move(grad));
    }
    // sector i (free coordinate i+1) lives on pair (0, i+1), which has index i
    for (std::size_t i = 0; i < sectors_.size(); ++i) {
      VectorXd grad = VectorXd::Zero(dim_);
      grad(static_cast<Eigen::Index>(2 * i)) = std::cos(sectors_[i].phi_mid);
      grad(static_cast<Eigen::Index>(2 * i + 1)) = -std::sin(sectors_[i].phi_mid);
      s_grad_.push_back(std::move(grad));
    }
  }

  int n() const { return n_; }
  int barrier_weight() const { return n_ + static_cast<int>(sectors_.size()); }

  ComplexMatrix matrix(const VectorXd& x) const {
    ComplexMatrix w = ComplexMatrix::Identity(n_, n_);
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
      const auto [p, q] = pairs_[i];
      const Complex v(x(static_cast<Eigen::Index>(2 * i)), x(static_cast<Eigen::Index>(2 * i + 1)));
      w(p, q) = v;
      w(q, p) = std::conj(v);
    }
    return w;
  }

  VectorXd params(const ComplexMatrix& w) const {
    VectorXd x(dim_);
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
      const auto [p, q] = pairs_[i];
      x(static_cast<Eigen::Index>(2 * i)) = w(p, q).real();
      x(static_cast<Eigen::Index>(2 * i + 1)) = w(p, q).imag();
    }
    return x;
  }

  std::vector<double> gains(const VectorXd& x) const {
    std::vector<double> g;
    for (std::size_t k = 0; k < a_.size(); ++k) g.push_back(base_[k] + g_grad_[k].dot(x));
    return g;
  }

  std::vector<double> slacks(const VectorXd& x) const {
    std::vector<double> s;
    for (std::size_t i = 0; i < sectors_.size(); ++i) s.push_back(s_grad_[i].dot(x) - sectors_[i].rhs);
    return s;
  }

  static double objective_of(const std::vector<double>& g) {
    double f = 0.0;
    for (double gk : g) f += 1.0 / gk;
    return f;
  }

  // Barrier merit; +infinity outside the interior.
  double merit(const VectorXd& x, double mu) const {
    const auto g = gains(x);
    for (double gk : g) {
      if (!(gk > 0.0)) return kInfinity;
    }
    const auto s = slacks(x);
    double log_s = 0.0;
    for (double si : s) {
      if (!(si > 0.0)) return kInfinity;
      log_s += std::log(si);
    }
    Eigen::LLT<ComplexMatrix> llt(matrix(x));
    if (llt.info() != Eigen::Success) return kInfinity;
    double log_det = 0.0;
    const auto& l = llt.matrixLLT();
    for (int i = 0; i < n_; ++i) {
      const double d = l(i, i).real();
      if (!(d > 0.0)) return kInfinity;
      log_det += 2.0 * std::log(d);
    }
    return objective_of(g) - mu * (log_det + log_s);
  }

  // Gradient and Hessian of the merit at an interior point.
  void derivatives(const VectorXd& x, double mu, VectorXd& grad, MatrixXd& hess) const {
    grad = VectorXd::Zero(dim_);
    hess = MatrixXd::Zero(dim_, dim_);
    const auto g = gains(x);
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double gk = g[k];
      grad -= g_grad_[k] / (gk * gk);
      hess.noalias() += (2.0 / (gk * gk * gk)) * g_grad_[k] * g_grad_[k].transpose();
    }
    const auto s = slacks(x);
    for (std::size_t i = 0; i < s.size(); ++i) {
      grad -= mu * s_grad_[i] / s[i];
      hess.noalias() += (mu / (s[i] * s[i])) * s_grad_[i] * s_grad_[i].transpose();
    }
    const ComplexMatrix v = matrix(x).llt().solve(ComplexMatrix::Identity(n_, n_));
    const Complex jj(0.0, 1.0);
    for (std::size_t a = 0; a < pairs_.size(); ++a) {
      const auto [p, q] = pairs_[a];
      grad(static_cast<Eigen::Index>(2 * a)) -= mu * 2.0 * v(p, q).real();
      grad(static_cast<Eigen::Index>(2 * a + 1)) -= mu * 2.0 * v(p, q).imag();
      for (std::size_t b = a; b < pairs_.size(); ++b) {
        const auto [r, t] = pairs_[b];
        // Tr(V D_a V D_b) with D = alpha E_pq + beta E_qp; Tr(V E_pq V E_rs) = V_sp V_qr
        const Complex t_pq_rt = v(t, p) * v(q, r);
        const Complex t_pq_tr = v(r, p) * v(q, t);
        const Complex t_qp_rt = v(t, q) * v(p, r);
        const Complex t_qp_tr = v(r, q) * v(p, t);
        // x: (alpha, beta) = (1, 1); y: (alpha, beta) = (j, -j)
        const double xx = (t_pq_rt + t_pq_tr + t_qp_rt + t_qp_tr).real();
        const double xy = (jj * (t_pq_rt - t_pq_tr + t_qp_rt - t_qp_tr)).real();
        const double yx = (jj * (t_pq_rt + t_pq_tr - t_qp_rt - t_qp_tr)).real();
        const double yy = (-t_pq_rt + t_pq_tr + t_qp_rt - t_qp_tr).real();
        const auto ia = static_cast<Eigen::Index>(2 * a);
        const auto ib = static_cast<Eigen::Index>(2 * b);
        hess(ia, ib) += mu * xx;
        hess(ia, ib + 1) += mu * xy;
        hess(ia + 1, ib) += mu * yx;
        hess(ia + 1, ib + 1) += mu * yy;
        if (b != a) {
          hess(ib, ia) += mu * xx;
          hess(ib + 1, ia) += mu * xy;
          hess(ib, ia + 1) += mu * yx;
          hess(ib + 1, ia + 1) += mu * yy;
        }
      }
    }
  }

  // Lower bound on the relaxation: tangent plane of the objective at x, then
  // weak duality for the linear SDP with a dual point built from the barrier
  // multipliers and shifted by lambda_min so the slack matrix is PSD.
  double certified_bound(const VectorXd& x, double mu) const {
    const ComplexMatrix w = matrix(x);
    const auto g = gains(x);
    const auto s = slacks(x);
    ComplexMatrix grad_obj = ComplexMatrix::Zero(n_, n_);
    for (std::size_t k = 0; k < a_.size(); ++k) {
      grad_obj -= (a_[k] * a_[k].adjoint()) / (g[k] * g[k]);
    }
    ComplexMatrix sector_part = ComplexMatrix::Zero(n_, n_);
    double sector_dual = 0.0;
    for (std::size_t i = 0; i < sectors_.size(); ++i) {
      const double z = mu / s[i];
      const int col = static_cast<int>(i) + 1;
      sector_part(0, col) += 0.5 * z * std::polar(1.0, -sectors_[i].phi_mid);
      sector_part(col, 0) += 0.5 * z * std::polar(1.0, sectors_[i].phi_mid);
      sector_dual += z * sectors_[i].rhs;
    }
    const ComplexMatrix v = w.llt().solve(ComplexMatrix::Identity(n_, n_));
    const ComplexMatrix centred = grad_obj - sector_part - mu * v;
    VectorXd y(n_);
    for (int i = 0; i < n_; ++i) y(i) = centred(i, i).real();
    ComplexMatrix slack = grad_obj - sector_part;
    for (int i = 0; i < n_; ++i) slack(i, i) -= y(i);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(slack, Eigen::EigenvaluesOnly);
    const double lam_min = eig.eigenvalues()(0);
    const double guard = 64.0 * std::numeric_limits<double>::epsilon() * n_ * (slack.norm() + 1.0);
    const double dual = y.sum() + sector_dual + n_ * (lam_min - guard);
    const double linear_at_w = (grad_obj.cwiseProduct(w.transpose())).sum().real();
    return objective_of(g) - linear_at_w + dual;
  }

 private:
  std::vector<ComplexVector> a_;
  std::vector<SectorConstraint> sectors_;
  std::vector<std::pair<int, int>> pairs_;
  int n_ = 0;
  int dim_ = 0;
  std::vector<double> base_;
  std::vector<VectorXd> g_grad_;
  std::vector<VectorXd> s_grad_;
};

}  // namespace

SdpOutcome solve_node(const ChannelSet& ch, const PhaseBox& box, const SdpOptions& options) {
  box.validate();
  const int n_ant = ch.antennas();
  if (box.size() != n_ant) throw DimensionError("solve_node: box size does not match N");
  if (!(options.tol > 0.0)) throw ContractError("solve_node: tol must be positive");

  std::vector<int> free_coords;
  std::vector<SectorConstraint> sectors;
  for (int n = 0; n < n_ant; ++n) {
    const auto sc = sector_constraint(box.lo[static_cast<std::size_t>(n)], box.hi[static_cast<std::size_t>(n)]);
    if (box.width(n) > 0.0) {
      free_coords.push_back(n);
      sectors.push_back(sc);
    }
  }
  const int n_red = 1 + static_cast<int>(free_coords.size());

  // the anchor absorbs every zero-width coordinate: h_k^H w = a_k^H [1; w_free]
  std::vector<ComplexVector> a;
  bool degenerate = false;
  for (int k = 0; k < ch.users(); ++k) {
    const ComplexVector& h = ch.channel(k);
    Complex fixed{0.0, 0.0};
    for (int n = 0; n < n_ant; ++n) {
      if (box.width(n) == 0.0) fixed += std::conj(h(n)) * std::polar(1.0, box.lo[static_cast<std::size_t>(n)]);
    }
    ComplexVector ak(n_red);
    ak(0) = std::conj(fixed);
    for (int i = 0; i + 1 < n_red; ++i) ak(i + 1) = h(free_coords[static_cast<std::size_t>(i)]);
    if (ak.squaredNorm() <= ch.null_threshold(k)) degenerate = true;
    a.push_back(std::move(ak));
  }

  // maps the reduced matrix back to the full (N+1)x(N+1) lifting
  ComplexMatrix expand = ComplexMatrix::Zero(n_ant + 1, n_red);
  expand(0, 0) = 1.0;
  {
    int i = 1;
    for (int n = 0; n < n_ant; ++n) {
      if (box.width(n) == 0.0) {
        expand(n + 1, 0) = std::polar(1.0, box.lo[static_cast<std::size_t>(n)]);
      } else {
        expand(n + 1, i++) = 1.0;
      }
    }
  }

  SdpOutcome out;
  if (degenerate) {
    out.lifted = expand * expand.adjoint();
    out.lifted.diagonal().setOnes();
    out.status = SdpStatus::Infeasible;
    return out;
  }

  if (n_red == 1) {
    double f = 0.0;
    for (const auto& ak : a) f += 1.0 / std::norm(ak(0));
    out.lifted = expand * expand.adjoint();
    out.primal_value = f;
    out.dual_lower_bound = f;
    out.status = SdpStatus::Optimal;
    return out;
  }

  ReducedRelaxation problem(a, sectors);

  // strictly feasible start: shrink the rank-one centre point towards I
  double alpha = 0.5;
  for (const auto& sc : sectors) alpha = std::min(alpha, 0.5 * (1.0 - sc.rhs));
  ComplexVector u(n_red);
  u(0) = 1.0;
  for (int i = 1; i < n_red; ++i) u(i) = std::polar(1.0, sectors[static_cast<std::size_t>(i - 1)].phi_mid);
  ComplexMatrix w0 = (1.0 - alpha) * (u * u.adjoint());
  w0 += alpha * ComplexMatrix::Identity(n_red, n_red);
  VectorXd x = problem.params(w0);

  const double m = problem.barrier_weight();
  const double f0 = ReducedRelaxation::objective_of(problem.gains(x));
  double mu = std::max(f0, 1e-12) / m;
  constexpr double kShrink = 0.2;

  int steps = 0;
  bool exhausted = false;
  double best_bound = -kInfinity;
  double primal = f0;
  VectorXd grad;
  MatrixXd hess;
  while (true) {
    // centre for the current mu with damped Newton
    for (int inner = 0; inner < 50; ++inner) {
      if (steps >= options.max_newton_steps) {
        exhausted = true;
        break;
      }
      problem.derivatives(x, mu, grad, hess);
      Eigen::LDLT<MatrixXd> ldlt(hess);
      VectorXd dx = ldlt.solve(-grad);
      if (ldlt.info() != Eigen::Success || !dx.allFinite()) {
        const double reg = 1e-12 * std::max(1.0, hess.diagonal().cwiseAbs().maxCoeff());
        dx = (hess + reg * MatrixXd::Identity(hess.rows(), hess.cols())).ldlt().solve(-grad);
      }
      const double decrement = -grad.dot(dx);
      ++steps;
      if (!(decrement > 0.0)) break;
      const double phi = problem.merit(x, mu);
      double t = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 60; ++ls) {
        const VectorXd trial = x + t * dx;
        if (problem.merit(trial, mu) <= phi - 0.25 * t * decrement) {
          x = trial;
          moved = true;
          break;
        }
        t *= 0.5;
      }
      if (!moved || decrement < 1e-6 * mu) break;
    }
    // every iterate yields a valid bound; keep the best
    primal = ReducedRelaxation::objective_of(problem.gains(x));
    best_bound = std::max(best_bound, problem.certified_bound(x, mu));
    const double target = options.tol * std::max(1.0, primal);
    if (exhausted || primal - best_bound <= target || mu * m <= 1e-3 * target) break;
    mu *= kShrink;
  }

  out.newton_steps = steps;
  out.primal_value = primal;
  out.dual_lower_bound = std::min(best_bound, primal);
  out.lifted = expand * problem.matrix(x) * expand.adjoint();
  const double gap = out.primal_value - out.dual_lower_bound;
  out.status = gap <= options.tol * std::max(1.0, out.primal_value) ? SdpStatus::Optimal
                                                                    : SdpStatus::MaxIterations;
  return out;
}

}  // namespace maxmin_beam
