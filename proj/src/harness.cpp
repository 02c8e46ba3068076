/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "maxmin_beam/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <thread>

#include "maxmin_beam/baselines.hpp"
#include "maxmin_beam/bb_binary.hpp"
#include "maxmin_beam/bb_continuous.hpp"
#include "maxmin_beam/bb_mary.hpp"
#include "maxmin_beam/errors.hpp"
#include "maxmin_beam/random.hpp"

namespace maxmin_beam {

std::string to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::BB:
      return "bb";
    case SolverKind::AO:
      return "ao";
    case SolverKind::Oracle:
      return "oracle";
  }
  return "unknown";
}

SolverKind parse_solver(const std::string& tag) {
  if (tag == "bb") return SolverKind::BB;
  if (tag == "ao") return SolverKind::AO;
  if (tag == "oracle") return SolverKind::Oracle;
  throw ContractError("unknown solver tag '" + tag + "'");
}

ChannelSet generate_channels(std::uint64_t seed, std::uint64_t trial, int users, int antennas,
                             double sigma2) {
  if (users < 1 || antennas < 1) throw ContractError("generate_channels: K and N must be positive");
  auto rng = CounterRng::keyed({seed, trial, static_cast<std::uint64_t>(users),
                                static_cast<std::uint64_t>(antennas)});
  const double scale = std::sqrt(0.5);
  std::vector<ComplexVector> h;
  h.reserve(static_cast<std::size_t>(users));
  for (int k = 0; k < users; ++k) {
    ComplexVector hk(antennas);
    for (int n = 0; n < antennas; ++n) {
      const double re = rng.normal();
      const double im = rng.normal();
      hk(n) = Complex(scale * re, scale * im);
    }
    h.push_back(std::move(hk));
  }
  return ChannelSet(std::move(h), sigma2);
}

Solution solve_instance(const ChannelSet& ch, SolverKind solver, const PhaseConstraint& constraint,
                        const InstanceParams& params) {
  AoConfig ao;
  ao.seed = params.seed;
  ao.total_power = params.total_power;
  switch (solver) {
    case SolverKind::AO:
      return ao_solve(ch, constraint, ao);
    case SolverKind::Oracle:
      if (constraint.is_discrete()) {
        return brute_force_discrete(ch, constraint.levels(), params.total_power);
      }
      return grid_oracle_continuous(ch, params.oracle_steps, params.total_power);
    case SolverKind::BB:
      break;
  }
  switch (constraint.kind()) {
    case PhaseConstraint::Kind::Binary: {
      BinaryOptions opt;
      opt.total_power = params.total_power;
      opt.warm_start_config = ao;
      return solve_binary(ch, opt);
    }
    case PhaseConstraint::Kind::Mary: {
      MaryOptions opt;
      opt.total_power = params.total_power;
      opt.warm_start_config = ao;
      return solve_mary(ch, constraint.levels(), opt);
    }
    case PhaseConstraint::Kind::Continuous: {
      ContinuousOptions opt;
      opt.total_power = params.total_power;
      opt.epsilon = params.epsilon;
      opt.seed = params.seed;
      return solve_continuous(ch, opt);
    }
  }
  throw ContractError("solve_instance: unknown constraint");
}

SweepRow run_instance(const ChannelSet& ch, SolverKind solver, const PhaseConstraint& constraint,
                      const InstanceParams& params, bool record_timing) {
  SweepRow row;
  row.antennas = ch.antennas();
  row.users = ch.users();
  row.solver = solver;
  row.constraint = constraint.tag();
  const auto start = std::chrono::steady_clock::now();
  try {
    const Solution s = solve_instance(ch, solver, constraint, params);
    row.objective = s.objective;
    row.snr_floor = s.snr_floor;
    row.gap = s.certificate.gap;
    row.nodes = s.certificate.nodes_explored;
    row.status = s.status;
  } catch (const std::exception& e) {
    row.objective = kInfinity;
    row.snr_floor = 0.0;
    row.gap = kInfinity;
    row.status = SolveStatus::Degraded;
    row.error = e.what();
  }
  if (record_timing) {
    row.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return row;
}

SweepConfig default_sweep_config() {
  SweepConfig cfg;
  cfg.seed = 1;
  cfg.trials = 20;
  cfg.antenna_values = {2, 3, 4, 5, 6, 7, 8};
  cfg.user_values = {2, 3, 4};
  for (const auto& c : {PhaseConstraint::binary(), PhaseConstraint::mary(4)}) {
    cfg.modes.push_back({SolverKind::BB, c, 0});
    cfg.modes.push_back({SolverKind::AO, c, 0});
  }
  cfg.modes.push_back({SolverKind::BB, PhaseConstraint::continuous(), 6});
  cfg.modes.push_back({SolverKind::AO, PhaseConstraint::continuous(), 6});
  return cfg;
}

int configured_threads() {
  int threads = 0;
  if (const char* env = std::getenv("MAXMIN_BEAM_THREADS")) threads = std::atoi(env);
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  return std::max(1, threads);
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg, int threads) {
  if (cfg.trials < 1) throw ContractError("run_sweep: trials must be at least 1");
  if (!(cfg.total_power > 0.0) || !(cfg.sigma2 > 0.0)) {
    throw ContractError("run_sweep: P and sigma2 must be positive");
  }
  if (threads <= 0) threads = configured_threads();

  std::vector<std::vector<SweepRow>> per_trial(cfg.trials);
  auto run_trial = [&](std::uint64_t trial) {
    auto& rows = per_trial[trial];
    for (int n : cfg.antenna_values) {
      for (int k : cfg.user_values) {
        const ChannelSet ch = generate_channels(cfg.seed, trial, k, n, cfg.sigma2);
        InstanceParams params;
        params.total_power = cfg.total_power;
        params.epsilon = cfg.epsilon;
        params.oracle_steps = cfg.oracle_steps;
        params.seed = splitmix64(cfg.seed ^ splitmix64(trial));
        for (const auto& mode : cfg.modes) {
          if (mode.max_antennas > 0 && n > mode.max_antennas) continue;
          SweepRow row = run_instance(ch, mode.solver, mode.constraint, params, cfg.record_timing);
          row.trial = trial;
          rows.push_back(std::move(row));
        }
      }
    }
  };

  std::atomic<std::uint64_t> next{0};
  auto worker = [&]() {
    for (std::uint64_t t = next++; t < cfg.trials; t = next++) run_trial(t);
  };
  const auto pool_size = static_cast<std::uint64_t>(threads) < cfg.trials
                             ? static_cast<std::uint64_t>(threads)
                             : cfg.trials;
  if (pool_size <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::uint64_t i = 0; i < pool_size; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<SweepRow> rows;
  for (auto& r : per_trial) {
    for (auto& row : r) rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_real(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "trial,N,K,solver,constraint,objective,snr_floor,gap,nodes,wall_time_s\n";
  for (const auto& r : rows) {
    os << r.trial << ',' << r.antennas << ',' << r.users << ',' << to_string(r.solver) << ','
       << r.constraint << ',' << format_real(r.objective) << ',' << format_real(r.snr_floor) << ','
       << format_real(r.gap) << ',' << r.nodes << ',' << format_real(r.wall_time) << '\n';
  }
}

}  // namespace maxmin_beam
