/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>
#include <vector>

#include "maxmin_beam/model.hpp"

namespace maxmin_beam {

/// Cyclic coordinate-descent (alternating optimization) settings.
struct AoConfig {
  enum class Init { UniformRandom, MatchedToUser, Given };

  int max_sweeps = 100;
  double rel_tol = 1e-8;
  Init init = Init::UniformRandom;
  std::uint64_t seed = 0;
  /// User whose channel phases seed Init::MatchedToUser.
  int user = 0;
  /// Starting phases for Init::Given (quantized to the alphabet when discrete).
  std::vector<double> phases;
  /// Independent random starts; only Init::UniformRandom uses more than one.
  int restarts = 8;
  double total_power = 10.0;
};

/// Element-wise AO: every coordinate update exactly minimizes f over the
/// alphabet (discrete) or over a 64-point grid refined by golden section
/// (continuous). Returns the best restart, anchored so that theta_1 = 0.
Solution ao_solve(const ChannelSet& ch, const PhaseConstraint& constraint,
                  const AoConfig& cfg = {});

/// Valid lower bound on f over every unit-modulus beamformer:
/// Sum_k 1 / (||h_k||_1)^2.
double trivial_lower_bound(const ChannelSet& ch);

/// Exact minimum over the M-ary alphabet with w_1 = 1 by lexicographic
/// enumeration (first minimizer kept). Throws ResourceError if M^(N-1) > 2^24.
Solution brute_force_discrete(const ChannelSet& ch, int M, double total_power = 10.0);

/// Best point of the uniform grid 2 pi s / steps on coordinates 2..N with
/// theta_1 = 0. Throws ResourceError if steps^(N-1) > 2^24.
Solution grid_oracle_continuous(const ChannelSet& ch, int steps_per_dim,
                                double total_power = 10.0);

}  // namespace maxmin_beam
