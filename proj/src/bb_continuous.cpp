/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "maxmin_beam/bb_continuous.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "maxmin_beam/baselines.hpp"
#include "maxmin_beam/errors.hpp"

namespace maxmin_beam {

Beamformer round_midpoint(const PhaseBox& box) {
  std::vector<double> theta;
  theta.reserve(box.lo.size());
  for (int n = 0; n < box.size(); ++n) {
    theta.push_back(0.5 * (box.lo[static_cast<std::size_t>(n)] + box.hi[static_cast<std::size_t>(n)]));
  }
  return Beamformer::from_phases(theta);
}

Beamformer round_projection(const PhaseBox& box, const SdpOutcome& lifted) {
  if (lifted.lifted.rows() != box.size() + 1) {
    throw DimensionError("round_projection: lifted matrix does not match the box");
  }
  std::vector<double> theta;
  theta.reserve(box.lo.size());
  for (int n = 0; n < box.size(); ++n) {
    const double lo = box.lo[static_cast<std::size_t>(n)];
    const double hi = box.hi[static_cast<std::size_t>(n)];
    const double mid = 0.5 * (lo + hi);
    const Complex entry = lifted.lifted(n + 1, 0);
    if (std::abs(entry) == 0.0) {
      theta.push_back(mid);
      continue;
    }
    // representative of arg(entry) in [mid - pi, mid + pi)
    double t = std::arg(entry);
    t = mid + std::remainder(t - mid, kTwoPi);
    theta.push_back(std::clamp(t, lo, hi));
  }
  // from_phases wraps 2pi to 0, which is the same point on the circle
  return Beamformer::from_phases(theta);
}

std::pair<PhaseBox, PhaseBox> branch_box(const PhaseBox& box) {
  int widest = -1;
  double best = 0.0;
  for (int n = 0; n < box.size(); ++n) {
    if (box.width(n) > best) {
      best = box.width(n);
      widest = n;
    }
  }
  if (widest < 0) throw ContractError("branch_box: box is a single point");
  const auto idx = static_cast<std::size_t>(widest);
  const double mid = 0.5 * (box.lo[idx] + box.hi[idx]);
  PhaseBox left = box;
  PhaseBox right = box;
  left.hi[idx] = mid;
  right.lo[idx] = mid;
  return {std::move(left), std::move(right)};
}

namespace {

struct OpenBox {
  double lb;
  std::uint64_t order;
  PhaseBox box;
};

struct OpenBoxOrder {
  bool operator()(const OpenBox& a, const OpenBox& b) const {
    if (a.lb != b.lb) return a.lb > b.lb;
    return a.order > b.order;
  }
};

}  // namespace

Solution solve_continuous(const ChannelSet& ch, const ContinuousOptions& options) {
  if (!(options.epsilon > 0.0)) throw ContractError("solve_continuous: epsilon must be positive");
  const int n = ch.antennas();
  const double eps = options.epsilon;

  Beamformer best_w = Beamformer::from_phases(std::vector<double>(static_cast<std::size_t>(n), 0.0));
  double best_f = objective(best_w, ch);
  if (options.warm_starts > 0) {
    AoConfig cfg;
    cfg.restarts = options.warm_starts;
    cfg.seed = options.seed;
    const auto warm = ao_solve(ch, PhaseConstraint::continuous(), cfg);
    if (warm.objective < best_f) {
      best_f = warm.objective;
      best_w = warm.beamformer;
    }
  }
  auto offer = [&](const Beamformer& w) {
    const double f = objective(w, ch);
    if (f < best_f) {
      best_f = f;
      best_w = w;
    }
  };

  std::uint64_t solves = 0;
  std::uint64_t order = 0;
  double closed_lb = kInfinity;  // min LB over discarded boxes
  std::priority_queue<OpenBox, std::vector<OpenBox>, OpenBoxOrder> open;
  bool budget_hit = false;

  // evaluates a box and either closes it or queues it
  auto process = [&](PhaseBox box) {
    const SdpOutcome sdp = solve_node(ch, box, options.sdp);
    ++solves;
    const double lb = sdp.dual_lower_bound;
    if (std::isinf(lb)) {
      closed_lb = std::min(closed_lb, lb);
      return;
    }
    const Beamformer proj = round_projection(box, sdp);
    offer(round_midpoint(box));
    offer(proj);
    if (lb >= best_f - eps || box.max_width() == 0.0) {
      closed_lb = std::min(closed_lb, lb);
      return;
    }
    open.push({lb, order++, std::move(box)});
  };

  // theta_1 fixed at 0, every other coordinate pre-split into [0, pi] and [pi, 2pi]
  const int free = n - 1;
  const std::uint64_t initial = std::uint64_t{1} << free;
  for (std::uint64_t mask = 0; mask < initial; ++mask) {
    PhaseBox box;
    box.lo.assign(static_cast<std::size_t>(n), 0.0);
    box.hi.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < free; ++i) {
      const bool upper = (mask >> (free - 1 - i)) & 1U;
      box.lo[static_cast<std::size_t>(i) + 1] = upper ? kPi : 0.0;
      box.hi[static_cast<std::size_t>(i) + 1] = upper ? kTwoPi : kPi;
    }
    process(std::move(box));
  }

  while (!open.empty()) {
    if (open.top().lb >= best_f - eps) {
      // best-first: everything left is prunable
      while (!open.empty()) {
        closed_lb = std::min(closed_lb, open.top().lb);
        open.pop();
      }
      break;
    }
    if (solves + 2 > options.node_budget) {
      budget_hit = true;
      break;
    }
    OpenBox node = open.top();
    open.pop();
    if (node.lb >= best_f - eps) {
      closed_lb = std::min(closed_lb, node.lb);
      continue;
    }
    auto [left, right] = branch_box(node.box);
    process(std::move(left));
    process(std::move(right));
  }

  double global_lb = std::min(closed_lb, best_f);
  if (!open.empty()) global_lb = std::min(global_lb, open.top().lb);

  Certificate cert;
  cert.global_lower_bound = global_lb;
  cert.gap = std::isinf(best_f) ? kInfinity : std::max(0.0, best_f - global_lb);
  cert.nodes_explored = solves;
  const SolveStatus status =
      budget_hit || cert.gap > eps ? SolveStatus::Degraded : SolveStatus::Optimal;
  return make_solution(best_w.anchored(), ch, options.total_power, cert, status);
}

}  // namespace maxmin_beam
