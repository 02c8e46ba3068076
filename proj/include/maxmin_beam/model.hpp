/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "maxmin_beam/numerics.hpp"

namespace maxmin_beam {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kPi = 3.141592653589793238462643383279;

/// K user channels of length N and the common noise power.
class ChannelSet {
 public:
  ChannelSet(std::vector<ComplexVector> channels, double sigma2);

  int users() const noexcept { return static_cast<int>(channels_.size()); }
  int antennas() const noexcept { return static_cast<int>(channels_.front().size()); }
  double sigma2() const noexcept { return sigma2_; }
  const ComplexVector& channel(int k) const { return channels_[static_cast<std::size_t>(k)]; }
  const std::vector<ComplexVector>& channels() const noexcept { return channels_; }

  /// Null threshold for user k: 1e-12 * ||h_k||^2 * N.
  double null_threshold(int k) const { return null_threshold_[static_cast<std::size_t>(k)]; }

  /// Sum_k h_k h_k^H.
  ComplexMatrix gram() const;

 private:
  std::vector<ComplexVector> channels_;
  std::vector<double> null_threshold_;
  double sigma2_;
};

class PhaseConstraint {
 public:
  enum class Kind { Binary, Mary, Continuous };

  static PhaseConstraint binary() { return PhaseConstraint(Kind::Binary, 2); }
  static PhaseConstraint mary(int levels);
  static PhaseConstraint continuous() { return PhaseConstraint(Kind::Continuous, 0); }

  Kind kind() const noexcept { return kind_; }
  bool is_discrete() const noexcept { return kind_ != Kind::Continuous; }
  /// Number of phase levels; 2 for Binary, 0 for Continuous.
  int levels() const noexcept { return levels_; }
  /// "binary", "mary<M>" or "continuous".
  std::string tag() const;

 private:
  PhaseConstraint(Kind kind, int levels) : kind_(kind), levels_(levels) {}
  Kind kind_;
  int levels_;
};

/// Unit-modulus weights w_n = exp(j theta_n) with theta_n in [0, 2pi).
class Beamformer {
 public:
  static Beamformer from_phases(std::span<const double> theta);
  /// Phases 2 pi m_n / M. Multiples of pi/2 are represented exactly.
  static Beamformer from_levels(std::span<const int> levels, int M);

  int size() const noexcept { return static_cast<int>(theta_.size()); }
  const std::vector<double>& phases() const noexcept { return theta_; }
  const ComplexVector& weights() const noexcept { return w_; }

  /// Rotate all phases so that theta_1 = 0. Leaves the objective unchanged.
  Beamformer anchored() const;

 private:
  std::vector<double> theta_;
  ComplexVector w_;
};

/// Unit-modulus point for level m of an M-ary alphabet.
Complex level_weight(int m, int M);

/// Wrap an angle into [0, 2pi).
double wrap_phase(double theta);

enum class SolveStatus { Optimal, Degraded, Infeasible };
std::string to_string(SolveStatus status);

struct Certificate {
  double global_lower_bound = 0.0;
  double gap = 0.0;
  std::uint64_t nodes_explored = 0;
};

struct Solution {
  Beamformer beamformer;
  double objective = kInfinity;
  std::vector<double> powers;
  double snr_floor = 0.0;
  Certificate certificate;
  SolveStatus status = SolveStatus::Optimal;
};

/// Sum_k 1 / |h_k^H w|^2; +infinity when any user falls below its null threshold.
double objective(const Beamformer& w, const ChannelSet& ch);

/// Same as objective() for a raw weight vector.
double objective(const ComplexVector& w, const ChannelSet& ch);

/// G_k = |h_k^H w|^2 / (N sigma^2); zero for a nulled user.
std::vector<double> effective_gains(const Beamformer& w, const ChannelSet& ch);

struct PowerAllocation {
  std::vector<double> powers;
  double t_star = 0.0;
};

/// Equal-SNR allocation P_k = (P / G_k) / Sum_j (1 / G_j). Throws
/// InfeasibleUserError if any gain is nonpositive.
PowerAllocation allocate_power(std::span<const double> gains, double total_power);

/// P / (N sigma^2 f); zero for an infinite objective.
double snr_floor(double objective_value, double total_power, int antennas, double sigma2);

/// Fills objective, powers and snr_floor for `w`. A nulled user yields zero
/// powers, snr_floor 0 and status Infeasible.
Solution make_solution(const Beamformer& w, const ChannelSet& ch, double total_power,
                       Certificate certificate, SolveStatus status = SolveStatus::Optimal);

}  // namespace maxmin_beam
