/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "maxmin_beam/model.hpp"

namespace maxmin_beam {

enum class SolverKind { BB, AO, Oracle };
std::string to_string(SolverKind kind);
/// "bb", "ao" or "oracle"; throws ContractError otherwise.
SolverKind parse_solver(const std::string& tag);

/// i.i.d. CN(0, 1) channels. Entry (k, n) uses draws 2(kN + n) and
/// 2(kN + n) + 1 of the CounterRng keyed by (seed, trial, K, N) through
/// Box-Muller, scaled by sqrt(1/2).
ChannelSet generate_channels(std::uint64_t seed, std::uint64_t trial, int users, int antennas,
                             double sigma2 = 1.0);

struct InstanceParams {
  double total_power = 10.0;
  double epsilon = 1e-3;
  std::uint64_t seed = 0;
  /// Grid resolution used by the continuous oracle.
  int oracle_steps = 64;
};

Solution solve_instance(const ChannelSet& ch, SolverKind solver, const PhaseConstraint& constraint,
                        const InstanceParams& params);

struct SweepRow {
  std::uint64_t trial = 0;
  int antennas = 0;
  int users = 0;
  SolverKind solver = SolverKind::BB;
  std::string constraint;
  double objective = kInfinity;
  double snr_floor = 0.0;
  double gap = 0.0;
  std::uint64_t nodes = 0;
  double wall_time = 0.0;
  SolveStatus status = SolveStatus::Optimal;
  std::string error;
};

/// Solves one instance and records the row. Solver exceptions are caught and
/// reported through status/error; wall time is measured only when requested.
SweepRow run_instance(const ChannelSet& ch, SolverKind solver, const PhaseConstraint& constraint,
                      const InstanceParams& params, bool record_timing = false);

struct SweepMode {
  SolverKind solver = SolverKind::BB;
  PhaseConstraint constraint = PhaseConstraint::binary();
  /// Rows with N above this are skipped; 0 means no cap.
  int max_antennas = 0;
};

struct SweepConfig {
  std::uint64_t seed = 1;
  std::uint64_t trials = 1;
  std::vector<int> antenna_values;
  std::vector<int> user_values;
  std::vector<SweepMode> modes;
  double total_power = 10.0;
  double sigma2 = 1.0;
  double epsilon = 1e-3;
  int oracle_steps = 64;
  bool record_timing = false;
};

/// Desk-scale default: N in {2..8}, K in {2, 3, 4}, BB and AO for binary,
/// 4-ary and continuous phases (continuous capped at N = 4), 20 trials.
SweepConfig default_sweep_config();

/// Worker count from MAXMIN_BEAM_THREADS (unset or 0 means hardware concurrency).
int configured_threads();

/// Rows ordered by (trial, N, K, mode). All modes of a cell share one ChannelSet.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg, int threads = 0);

/// %.12g, with "inf" for infinite values.
std::string format_real(double value);

/// Header trial,N,K,solver,constraint,objective,snr_floor,gap,nodes,wall_time_s.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace maxmin_beam
