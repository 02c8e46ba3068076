/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "maxmin_beam/bb_mary.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "maxmin_beam/errors.hpp"

namespace maxmin_beam {

MaryNode make_mary_node(const ChannelSet& ch, int M, std::vector<int> prefix) {
  if (M < 2) throw ContractError("make_mary_node: M must be at least 2");
  const int n = ch.antennas();
  if (prefix.empty() || static_cast<int>(prefix.size()) > n || prefix.front() != 0) {
    throw ContractError("make_mary_node: prefix must start with level 0 and fit in N");
  }
  MaryNode node;
  node.levels = M;
  node.prefix = std::move(prefix);
  const int d = node.depth();
  for (int k = 0; k < ch.users(); ++k) {
    Complex a{0.0, 0.0};
    for (int i = 0; i < d; ++i) {
      const int m = node.prefix[static_cast<std::size_t>(i)];
      if (m < 0 || m >= M) throw ContractError("make_mary_node: level out of range");
      a += std::conj(ch.channel(k)(i)) * level_weight(m, M);
    }
    node.partial.push_back(a);
    node.residual.push_back(ch.channel(k).tail(n - d).cwiseAbs().sum());
  }
  return node;
}

MaryNode extend_mary_node(const MaryNode& node, const ChannelSet& ch, int level) {
  const int d = node.depth();
  if (d >= ch.antennas()) throw ContractError("extend_mary_node: node is a leaf");
  if (level < 0 || level >= node.levels) throw ContractError("extend_mary_node: level out of range");
  MaryNode child = node;
  child.prefix.push_back(level);
  const Complex u = level_weight(level, node.levels);
  for (int k = 0; k < ch.users(); ++k) {
    const auto uk = static_cast<std::size_t>(k);
    const Complex h = ch.channel(k)(d);
    child.partial[uk] += std::conj(h) * u;
    // recompute the tail sum rather than subtract, so rho_k is exactly zero at the leaf
    child.residual[uk] = ch.channel(k).tail(ch.antennas() - d - 1).cwiseAbs().sum();
  }
  return child;
}

double indiv_lb(const MaryNode& node) {
  double lb = 0.0;
  for (std::size_t k = 0; k < node.partial.size(); ++k) {
    const double amp = std::abs(node.partial[k]) + node.residual[k];
    if (amp == 0.0) return kInfinity;
    lb += 1.0 / (amp * amp);
  }
  return lb;
}

double agg_lb(const MaryNode& node, const ComplexMatrix& r_circ) {
  const int n = static_cast<int>(r_circ.rows());
  const int d = node.depth();
  ComplexVector wf(d);
  for (int i = 0; i < d; ++i) wf(i) = level_weight(node.prefix[static_cast<std::size_t>(i)], node.levels);
  double ub = quadratic_form(wf, r_circ.topLeftCorner(d, d));
  if (d < n) {
    const ComplexVector row = (wf.adjoint() * r_circ.topRightCorner(d, n - d)).transpose();
    ub += 2.0 * row.cwiseAbs().sum();
    ub += static_cast<double>(n - d) * max_eigenvalue(r_circ.bottomRightCorner(n - d, n - d));
  }
  if (!(ub > 0.0)) return kInfinity;
  const double k = static_cast<double>(node.partial.size());
  return k * k / ub;
}

double combined_lb(const MaryNode& node, const ComplexMatrix& r_circ) {
  return std::max(indiv_lb(node), agg_lb(node, r_circ));
}

namespace {

struct OpenNode {
  double lb;
  int depth;
  std::vector<std::uint16_t> prefix;
  std::vector<Complex> partial;
};

// priority_queue pops the "largest"; we want min lb, then deeper, then lexicographically lower
struct OpenNodeOrder {
  bool operator()(const OpenNode& a, const OpenNode& b) const {
    if (a.lb != b.lb) return a.lb > b.lb;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.prefix > b.prefix;
  }
};

}  // namespace

Solution solve_mary(const ChannelSet& ch, int M, const MaryOptions& options) {
  if (M < 2) throw ContractError("solve_mary: M must be at least 2");
  if (M > 65535) throw ContractError("solve_mary: M too large");
  const int n = ch.antennas();
  const int n_users = ch.users();
  const double k2 = static_cast<double>(n_users) * n_users;

  Beamformer best_w;
  double best_f = kInfinity;
  if (options.warm_start) {
    const auto warm = ao_solve(ch, PhaseConstraint::mary(M), options.warm_start_config);
    best_w = warm.beamformer;
    best_f = warm.objective;
  }
  if (!std::isfinite(best_f)) {
    best_w = Beamformer::from_levels(std::vector<int>(static_cast<std::size_t>(n), 0), M);
    best_f = objective(best_w, ch);
  }

  std::vector<Complex> alphabet;
  for (int m = 0; m < M; ++m) alphabet.push_back(level_weight(m, M));

  const ComplexMatrix r_circ = ch.gram();
  // rho_k at depth d and lambda_max of the free block at depth d
  std::vector<std::vector<double>> residual(static_cast<std::size_t>(n) + 1,
                                            std::vector<double>(static_cast<std::size_t>(n_users), 0.0));
  std::vector<double> suffix_lambda(static_cast<std::size_t>(n) + 1, 0.0);
  for (int d = 1; d <= n; ++d) {
    for (int k = 0; k < n_users; ++k) {
      residual[static_cast<std::size_t>(d)][static_cast<std::size_t>(k)] =
          ch.channel(k).tail(n - d).cwiseAbs().sum();
    }
    if (d < n) {
      suffix_lambda[static_cast<std::size_t>(d)] =
          max_eigenvalue(r_circ.bottomRightCorner(n - d, n - d));
    }
  }
  // conj(h_kj) laid out as [j][k]
  std::vector<std::vector<Complex>> coeff(static_cast<std::size_t>(n),
                                          std::vector<Complex>(static_cast<std::size_t>(n_users)));
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n_users; ++k) {
      coeff[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] = std::conj(ch.channel(k)(j));
    }
  }

  auto bound = [&](int d, const std::vector<Complex>& partial) {
    const auto& rho = residual[static_cast<std::size_t>(d)];
    double indiv = 0.0;
    double c_tot = 0.0;
    for (int k = 0; k < n_users; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      const double a = std::abs(partial[uk]);
      const double amp = a + rho[uk];
      indiv = amp == 0.0 ? kInfinity : indiv + 1.0 / (amp * amp);
      c_tot += a * a;
    }
    double cross = 0.0;
    for (int j = d; j < n; ++j) {
      Complex r{0.0, 0.0};
      const auto& cj = coeff[static_cast<std::size_t>(j)];
      for (int k = 0; k < n_users; ++k) {
        r += std::conj(partial[static_cast<std::size_t>(k)]) * cj[static_cast<std::size_t>(k)];
      }
      cross += std::abs(r);
    }
    const double ub = c_tot + 2.0 * cross + (n - d) * suffix_lambda[static_cast<std::size_t>(d)];
    const double agg = ub > 0.0 ? k2 / ub : kInfinity;
    return std::max(indiv, agg);
  };

  std::priority_queue<OpenNode, std::vector<OpenNode>, OpenNodeOrder> open;
  {
    OpenNode root;
    root.depth = 1;
    root.prefix = {0};
    root.partial = coeff[0];
    root.lb = bound(1, root.partial);
    open.push(std::move(root));
  }

  std::uint64_t explored = 0;
  while (!open.empty()) {
    OpenNode node = open.top();
    open.pop();
    ++explored;
    if (node.lb >= best_f - options.tie_tolerance) break;  // every remaining lb is at least this
    if (node.depth == n) {
      double f = 0.0;
      for (int k = 0; k < n_users; ++k) {
        const double gain = std::norm(node.partial[static_cast<std::size_t>(k)]);
        if (gain <= ch.null_threshold(k) || gain == 0.0) {
          f = kInfinity;
          break;
        }
        f += 1.0 / gain;
      }
      if (f < best_f) {
        best_f = f;
        std::vector<int> levels(node.prefix.begin(), node.prefix.end());
        best_w = Beamformer::from_levels(levels, M);
      }
      continue;
    }
    const int d = node.depth;
    const auto& cd = coeff[static_cast<std::size_t>(d)];
    for (int m = 0; m < M; ++m) {
      OpenNode child;
      child.depth = d + 1;
      child.partial = node.partial;
      const Complex u = alphabet[static_cast<std::size_t>(m)];
      for (int k = 0; k < n_users; ++k) child.partial[static_cast<std::size_t>(k)] += cd[static_cast<std::size_t>(k)] * u;
      child.lb = bound(d + 1, child.partial);
      if (child.lb < best_f - options.tie_tolerance) {
        child.prefix = node.prefix;
        child.prefix.push_back(static_cast<std::uint16_t>(m));
        if (open.size() >= options.node_cap) {
          throw ResourceError("solve_mary: open-node cap exceeded");
        }
        open.push(std::move(child));
      }
    }
  }

  Certificate cert;
  cert.global_lower_bound = best_f;
  cert.gap = 0.0;
  cert.nodes_explored = explored;
  return make_solution(best_w, ch, options.total_power, cert);
}

}  // namespace maxmin_beam
