/*
 * SPDX-License-Identifier: Apache-2.0
 */
// maxmin-beam: solve, sweep, compare and generate channel files.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "maxmin_beam/baselines.hpp"
#include "maxmin_beam/bb_binary.hpp"
#include "maxmin_beam/bb_continuous.hpp"
#include "maxmin_beam/bb_mary.hpp"
#include "maxmin_beam/errors.hpp"
#include "maxmin_beam/harness.hpp"
#include "maxmin_beam/io.hpp"

namespace mb = maxmin_beam;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDegraded = 2;

int exit_code_for(const mb::Solution& s) {
  return s.status == mb::SolveStatus::Optimal ? kExitOk : kExitDegraded;
}

mb::PhaseConstraint constraint_for(const std::string& base, int m) {
  if (base == "binary") return mb::PhaseConstraint::binary();
  if (base == "mary") return mb::PhaseConstraint::mary(m);
  return mb::PhaseConstraint::continuous();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Max-min SNR analog beamforming solvers"};
  app.require_subcommand(1);

  std::string channels_path;
  std::string out_path;
  std::string mode = "binary";
  int levels = 4;
  double epsilon = 1e-3;
  double power_linear = 10.0;
  double power_dbm = 10.0;
  std::uint64_t seed = 0;

  auto* solve = app.add_subcommand("solve", "Solve one instance from a channel file");
  solve->add_option("--channels", channels_path, "Channel JSON file")->required();
  solve->add_option("--mode", mode, "Solver mode")
      ->check(CLI::IsMember({"binary", "mary", "continuous", "ao-binary", "ao-mary",
                             "ao-continuous"}));
  solve->add_option("--m", levels, "Phase levels for mary modes")->check(CLI::Range(2, 65535));
  solve->add_option("--epsilon", epsilon, "Continuous BB tolerance")->check(CLI::PositiveNumber);
  auto* lin = solve->add_option("--power-linear", power_linear, "Total power (linear)")
                  ->check(CLI::PositiveNumber);
  auto* dbm = solve->add_option("--power-dbm", power_dbm, "Total power in dBm");
  lin->excludes(dbm);
  solve->add_option("--seed", seed, "Seed for AO restarts");
  solve->add_option("--out", out_path, "Solution JSON output")->required();

  std::string config_path;
  std::string csv_path;
  bool timing = false;
  auto* sweep = app.add_subcommand("sweep", "Run a Monte Carlo sweep");
  sweep->add_option("--config", config_path, "Sweep config JSON")->required();
  sweep->add_option("--out", csv_path, "CSV output")->required();
  sweep->add_flag("--timing", timing, "Record wall time (output is then not reproducible)");

  int compare_levels = 4;
  auto* compare = app.add_subcommand("compare", "Compare BB and AO on one instance");
  compare->add_option("--channels", channels_path, "Channel JSON file")->required();
  compare->add_option("--m", compare_levels, "Phase levels (0 selects continuous phases)")
      ->required();
  compare->add_option("--epsilon", epsilon, "Continuous BB tolerance")->check(CLI::PositiveNumber);
  compare->add_option("--seed", seed, "Seed for AO restarts");

  std::uint64_t trial = 0;
  int users = 0;
  int antennas = 0;
  double sigma2 = 1.0;
  auto* gen = app.add_subcommand("gen-channels", "Write a Rayleigh channel file");
  gen->add_option("--seed", seed, "Seed")->required();
  gen->add_option("--trial", trial, "Trial index");
  gen->add_option("--k", users, "Users")->required()->check(CLI::PositiveNumber);
  gen->add_option("--n", antennas, "Antennas")->required()->check(CLI::PositiveNumber);
  gen->add_option("--sigma2", sigma2, "Noise power")->check(CLI::PositiveNumber);
  gen->add_option("--out", out_path, "Channel JSON output")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*solve) {
      const auto ch = mb::channels_from_json(mb::read_json_file(channels_path));
      mb::InstanceParams params;
      params.total_power = dbm->count() > 0 ? mb::dbm_to_linear(power_dbm) : power_linear;
      params.epsilon = epsilon;
      params.seed = seed;
      const bool ao = mode.rfind("ao-", 0) == 0;
      const std::string base = ao ? mode.substr(3) : mode;
      const auto solution = mb::solve_instance(ch, ao ? mb::SolverKind::AO : mb::SolverKind::BB,
                                               constraint_for(base, levels), params);
      auto j = mb::solution_to_json(solution);
      j["mode"] = mode;
      if (base == "mary") j["M"] = levels;
      mb::write_json_file(out_path, j);
      return exit_code_for(solution);
    }
    if (*sweep) {
      const auto cfg_json = mb::read_json_file(config_path);
      auto cfg = mb::sweep_config_from_json(cfg_json);
      cfg.record_timing = cfg.record_timing || timing;
      const auto rows = mb::run_sweep(cfg);
      std::ofstream out(csv_path);
      if (!out) throw mb::ContractError("cannot write '" + csv_path + "'");
      mb::write_sweep_csv(out, rows);
      for (const auto& r : rows) {
        if (r.status != mb::SolveStatus::Optimal) return kExitDegraded;
      }
      return kExitOk;
    }
    if (*compare) {
      const auto ch = mb::channels_from_json(mb::read_json_file(channels_path));
      if (compare_levels == 1 || compare_levels < 0) throw mb::ContractError("--m must be 0 or >= 2");
      const auto constraint = compare_levels == 0 ? mb::PhaseConstraint::continuous()
                                                  : mb::PhaseConstraint::mary(compare_levels);
      mb::InstanceParams params;
      params.epsilon = epsilon;
      params.seed = seed;
      const auto bb = mb::solve_instance(ch, mb::SolverKind::BB, constraint, params);
      const auto ao = mb::solve_instance(ch, mb::SolverKind::AO, constraint, params);
      const double rel = std::isfinite(bb.objective) && bb.objective > 0.0
                             ? (ao.objective - bb.objective) / bb.objective
                             : 0.0;
      std::cout << "constraint " << constraint.tag() << '\n'
                << "bb_objective " << mb::format_real(bb.objective) << '\n'
                << "ao_objective " << mb::format_real(ao.objective) << '\n'
                << "relative_gap " << mb::format_real(rel) << '\n';
      return bb.status == mb::SolveStatus::Optimal ? kExitOk : kExitDegraded;
    }
    if (*gen) {
      const auto ch = mb::generate_channels(seed, trial, users, antennas, sigma2);
      mb::write_json_file(out_path, mb::channels_to_json(ch));
      return kExitOk;
    }
  } catch (const mb::ContractError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const mb::DimensionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDegraded;
  }
  return kExitUsage;
}
