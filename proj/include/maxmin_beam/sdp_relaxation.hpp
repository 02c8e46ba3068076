/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <vector>

#include "maxmin_beam/model.hpp"

namespace maxmin_beam {

/// Product of phase intervals [lo_n, hi_n] inside [0, 2pi].
struct PhaseBox {
  std::vector<double> lo;
  std::vector<double> hi;

  int size() const noexcept { return static_cast<int>(lo.size()); }
  double width(int n) const { return hi[static_cast<std::size_t>(n)] - lo[static_cast<std::size_t>(n)]; }
  double max_width() const;
  bool contains(std::span<const double> theta, double slack = 0.0) const;
  /// Throws ContractError unless 0 <= lo <= hi <= 2pi entrywise.
  void validate() const;
};

/// Halfspace Re{W_n0 exp(-j phi_mid)} >= rhs containing the arc [lo, hi].
struct SectorConstraint {
  double phi_mid;
  double rhs;
};

/// phi_mid = (lo + hi) / 2, rhs = cos((hi - lo) / 2). Throws ContractError
/// when the width exceeds pi or is negative.
SectorConstraint sector_constraint(double lo, double hi);

/// True iff [[t, 1], [1, g]] is positive semidefinite, i.e. t, g >= 0 and t g >= 1.
bool schur_snr_constraint(double t, double g);

enum class SdpStatus { Optimal, MaxIterations, Infeasible };

struct SdpOutcome {
  /// (N+1)x(N+1) lifted matrix; row/column 0 is the anchor.
  ComplexMatrix lifted;
  double primal_value = kInfinity;
  /// Certified lower bound on the relaxation optimum.
  double dual_lower_bound = kInfinity;
  SdpStatus status = SdpStatus::Infeasible;
  int newton_steps = 0;
};

struct SdpOptions {
  /// Target relative duality gap, measured against max(1, primal).
  double tol = 1e-6;
  int max_newton_steps = 600;
};

/// Minimizes Sum_k 1 / Tr(H_k W) over W >= 0 with unit diagonal and one
/// sector halfspace per coordinate of `box`. Coordinates of zero width are
/// eliminated exactly. Every box width must be at most pi.
SdpOutcome solve_node(const ChannelSet& ch, const PhaseBox& box, const SdpOptions& options = {});

}  // namespace maxmin_beam
