/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>
#include <utility>

#include "maxmin_beam/model.hpp"
#include "maxmin_beam/sdp_relaxation.hpp"

namespace maxmin_beam {

/// Beamformer at the centre of every interval.
Beamformer round_midpoint(const PhaseBox& box);

/// Phases arg(W_n0) clamped into the box. The branch of arg nearest the
/// interval midpoint is used; a zero entry falls back to the midpoint.
Beamformer round_projection(const PhaseBox& box, const SdpOutcome& lifted);

/// Bisects the widest coordinate (lowest index on ties). Throws
/// ContractError when every width is zero.
std::pair<PhaseBox, PhaseBox> branch_box(const PhaseBox& box);

struct ContinuousOptions {
  /// Absolute tolerance on the objective.
  double epsilon = 1e-3;
  /// Maximum number of SDP solves.
  std::uint64_t node_budget = 100'000;
  double total_power = 10.0;
  /// Random AO restarts used as the initial incumbent (0 disables).
  int warm_starts = 8;
  std::uint64_t seed = 0;
  SdpOptions sdp{};
};

/// Spatial branch-and-bound over phase boxes with theta_1 fixed to 0.
/// On return certificate.gap = UB - LB_global, which is at most epsilon
/// unless the node budget ran out (status Degraded).
Solution solve_continuous(const ChannelSet& ch, const ContinuousOptions& options = {});

}  // namespace maxmin_beam
