/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>
#include <vector>

#include "maxmin_beam/baselines.hpp"
#include "maxmin_beam/model.hpp"

namespace maxmin_beam {

/// Prefix sign assignment w_1..w_d; w_1 is always +1.
struct BinaryNode {
  std::vector<int> fixed_signs;
  int depth() const noexcept { return static_cast<int>(fixed_signs.size()); }
};

/// Sum_k Re{h_k h_k^H}.
ComplexMatrix binary_gram(const ChannelSet& ch);

/// Upper bound on w^T R w over every sign completion of `node`:
/// C + 2 ||w_G^T R_GH||_1 + (N - d) lambda_max(R_HH). Requires depth < N.
double binary_node_ub(const BinaryNode& node, const ComplexMatrix& r);

/// K^2 / ub_tot, or +infinity when ub_tot <= 0.
double binary_node_lb(double ub_tot, int users);

struct BinaryOptions {
  double total_power = 10.0;
  bool warm_start = true;
  AoConfig warm_start_config{};
  /// Absolute slack on the prune test LB >= f* - tie_tolerance.
  double tie_tolerance = 1e-12;
};

/// Global minimizer of f over {-1, +1}^N with w_1 = +1 (depth-first BB).
Solution solve_binary(const ChannelSet& ch, const BinaryOptions& options = {});

}  // namespace maxmin_beam
