/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "maxmin_beam/bb_binary.hpp"

#include <cmath>

#include "maxmin_beam/errors.hpp"

namespace maxmin_beam {

ComplexMatrix binary_gram(const ChannelSet& ch) { return real_part_matrix(ch.gram()); }

double binary_node_ub(const BinaryNode& node, const ComplexMatrix& r) {
  const int n = static_cast<int>(r.rows());
  const int d = node.depth();
  if (d < 1 || d >= n) throw ContractError("binary_node_ub: depth must lie in [1, N)");
  if (node.fixed_signs.front() != 1) throw ContractError("binary_node_ub: w_1 must be +1");
  Eigen::VectorXd wg(d);
  for (int i = 0; i < d; ++i) wg(i) = node.fixed_signs[static_cast<std::size_t>(i)];
  const Eigen::MatrixXd rr = r.real();
  const double c_tot = wg.dot(rr.topLeftCorner(d, d) * wg);
  const double cross = (wg.transpose() * rr.topRightCorner(d, n - d)).cwiseAbs().sum();
  const double lam = max_eigenvalue(r.bottomRightCorner(n - d, n - d));
  return c_tot + 2.0 * cross + static_cast<double>(n - d) * lam;
}

double binary_node_lb(double ub_tot, int users) {
  if (!(ub_tot > 0.0)) return kInfinity;
  return static_cast<double>(users) * static_cast<double>(users) / ub_tot;
}

namespace {

struct Frame {
  int depth;      // number of fixed entries
  int sign;       // sign of entry depth-1 (0-based) just fixed
};

}  // namespace

Solution solve_binary(const ChannelSet& ch, const BinaryOptions& options) {
  const int n = ch.antennas();
  const int n_users = ch.users();

  Beamformer best_w;
  double best_f = kInfinity;
  if (options.warm_start) {
    const auto warm = ao_solve(ch, PhaseConstraint::binary(), options.warm_start_config);
    best_w = warm.beamformer;
    best_f = warm.objective;
  }
  std::vector<int> signs(static_cast<std::size_t>(n), 1);
  if (!std::isfinite(best_f)) {
    best_w = Beamformer::from_levels(std::vector<int>(static_cast<std::size_t>(n), 0), 2);
    best_f = objective(best_w, ch);
  }

  const Eigen::MatrixXd r = binary_gram(ch).real();
  // lambda_max(R_HH) for the suffix block that is free at depth d
  std::vector<double> suffix_lambda(static_cast<std::size_t>(n) + 1, 0.0);
  for (int d = 1; d < n; ++d) {
    suffix_lambda[static_cast<std::size_t>(d)] =
        max_eigenvalue(r.bottomRightCorner(n - d, n - d).cast<Complex>());
  }

  // per-depth state: cross[d] = w_G^T R_{G,:} and c_tot[d] for the prefix of length d
  std::vector<Eigen::VectorXd> cross(static_cast<std::size_t>(n) + 1, Eigen::VectorXd::Zero(n));
  std::vector<double> c_tot(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<std::vector<Complex>> sums(static_cast<std::size_t>(n) + 1,
                                         std::vector<Complex>(static_cast<std::size_t>(n_users)));
  const double k2 = static_cast<double>(n_users) * n_users;

  auto fix = [&](int d, int sign) {
    // extend prefix of length d by entry index d with `sign`
    const auto ud = static_cast<std::size_t>(d);
    signs[ud] = sign;
    c_tot[ud + 1] = c_tot[ud] + 2.0 * sign * cross[ud](d) + r(d, d);
    cross[ud + 1] = cross[ud] + sign * r.row(d).transpose();
    for (int k = 0; k < n_users; ++k) {
      sums[ud + 1][static_cast<std::size_t>(k)] =
          sums[ud][static_cast<std::size_t>(k)] + std::conj(ch.channel(k)(d)) * static_cast<double>(sign);
    }
  };

  std::uint64_t explored = 0;
  std::vector<Frame> stack;
  stack.push_back({1, 1});
  while (!stack.empty()) {
    const Frame node = stack.back();
    stack.pop_back();
    ++explored;
    const int d = node.depth;
    fix(d - 1, node.sign);
    const auto ud = static_cast<std::size_t>(d);

    if (d == n) {
      double f = 0.0;
      for (int k = 0; k < n_users; ++k) {
        const double gain = std::norm(sums[ud][static_cast<std::size_t>(k)]);
        if (gain <= ch.null_threshold(k) || gain == 0.0) {
          f = kInfinity;
          break;
        }
        f += 1.0 / gain;
      }
      if (f < best_f) {
        best_f = f;
        std::vector<int> levels(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) levels[static_cast<std::size_t>(i)] = signs[static_cast<std::size_t>(i)] > 0 ? 0 : 1;
        best_w = Beamformer::from_levels(levels, 2);
      }
      continue;
    }

    double free_cross = 0.0;
    for (int j = d; j < n; ++j) free_cross += std::abs(cross[ud](j));
    const double ub = c_tot[ud] + 2.0 * free_cross + (n - d) * suffix_lambda[ud];
    const double lb = ub > 0.0 ? k2 / ub : kInfinity;
    if (lb >= best_f - options.tie_tolerance) continue;

    // the child agreeing with the accumulated cross term goes on top
    const int preferred = cross[ud](d) >= 0.0 ? 1 : -1;
    stack.push_back({d + 1, -preferred});
    stack.push_back({d + 1, preferred});
  }

  Certificate cert;
  cert.global_lower_bound = best_f;
  cert.gap = 0.0;
  cert.nodes_explored = explored;
  return make_solution(best_w, ch, options.total_power, cert);
}

}  // namespace maxmin_beam
