/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>
#include <vector>

#include "maxmin_beam/baselines.hpp"
#include "maxmin_beam/model.hpp"

namespace maxmin_beam {

/// Prefix of M-ary levels (prefix[0] == 0, i.e. w_1 = 1) with cached
/// per-user partial sums A_k = Sum_{n<=d} conj(h_kn) w_n and residual
/// amplitudes rho_k = Sum_{n>d} |h_kn|.
struct MaryNode {
  int levels = 2;
  std::vector<int> prefix;
  std::vector<Complex> partial;
  std::vector<double> residual;
  int depth() const noexcept { return static_cast<int>(prefix.size()); }
};

/// Builds a node from scratch. Throws ContractError on an invalid prefix.
MaryNode make_mary_node(const ChannelSet& ch, int M, std::vector<int> prefix);

/// Appends one level, updating A_k and rho_k incrementally.
MaryNode extend_mary_node(const MaryNode& node, const ChannelSet& ch, int level);

/// Sum_k 1 / (|A_k| + rho_k)^2; +infinity if some amplitude bound is zero.
double indiv_lb(const MaryNode& node);

/// K^2 / UB_tot with UB_tot = w_F^H R_FF w_F + 2 ||w_F^H R_FU||_1 + (N - d) lambda_max(R_UU).
double agg_lb(const MaryNode& node, const ComplexMatrix& r_circ);

/// max(indiv_lb, agg_lb).
double combined_lb(const MaryNode& node, const ComplexMatrix& r_circ);

struct MaryOptions {
  double total_power = 10.0;
  bool warm_start = true;
  AoConfig warm_start_config{};
  /// Open-node limit; exceeding it throws ResourceError.
  std::uint64_t node_cap = 10'000'000;
  double tie_tolerance = 1e-12;
};

/// Global minimizer of f over the M-ary alphabet with w_1 = 1 (best-first BB).
Solution solve_mary(const ChannelSet& ch, int M, const MaryOptions& options = {});

}  // namespace maxmin_beam
