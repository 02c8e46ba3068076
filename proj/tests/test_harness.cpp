/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include <doctest.h>

#include <set>
#include <sstream>

#include "maxmin_beam/bb_binary.hpp"
#include "maxmin_beam/bb_mary.hpp"
#include "maxmin_beam/errors.hpp"
#include "maxmin_beam/harness.hpp"
#include "maxmin_beam/io.hpp"
#include "test_support.hpp"

using namespace maxmin_beam;
using maxmin_beam::testing::vec;

TEST_CASE("CounterRng determinism and moments") {
  auto a = CounterRng::keyed({1, 2, 3});
  auto b = CounterRng::keyed({1, 2, 3});
  auto c = CounterRng::keyed({1, 2, 4});
  for (int i = 0; i < 10; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
  }
  auto r = CounterRng(99);
  double sum = 0.0, sum2 = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    sum += z;
    sum2 += z * z;
  }
  CHECK(std::abs(sum / n) < 0.015);
  CHECK(std::abs(sum2 / n - 1.0) < 0.02);
}

TEST_CASE("generate_channels is deterministic") {
  const auto a = generate_channels(7, 3, 3, 5);
  const auto b = generate_channels(7, 3, 3, 5);
  for (int k = 0; k < 3; ++k) CHECK(a.channel(k) == b.channel(k));
  CHECK(generate_channels(7, 4, 3, 5).channel(0) != a.channel(0));
}

TEST_CASE("generate_channels has unit-variance entries") {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::uint64_t t = 0; t < 250; ++t) {
    const auto ch = generate_channels(11, t, 4, 10);
    for (int k = 0; k < 4; ++k) {
      sum += ch.channel(k).squaredNorm();
      count += 10;
    }
  }
  const double mean = sum / static_cast<double>(count);
  CHECK(mean >= 0.97);
  CHECK(mean <= 1.03);
}

TEST_CASE("generate_channels trials are uncorrelated") {
  Complex cross{0.0, 0.0};
  double na = 0.0, nb = 0.0;
  for (std::uint64_t t = 0; t < 500; ++t) {
    const auto a = generate_channels(3, 2 * t, 2, 10);
    const auto b = generate_channels(3, 2 * t + 1, 2, 10);
    for (int k = 0; k < 2; ++k) {
      cross += a.channel(k).dot(b.channel(k));
      na += a.channel(k).squaredNorm();
      nb += b.channel(k).squaredNorm();
    }
  }
  CHECK(std::abs(cross) / std::sqrt(na * nb) < 0.05);
}

TEST_CASE("parse_solver") {
  CHECK(parse_solver("bb") == SolverKind::BB);
  CHECK(parse_solver("ao") == SolverKind::AO);
  CHECK(parse_solver("oracle") == SolverKind::Oracle);
  CHECK(to_string(SolverKind::Oracle) == "oracle");
  CHECK_THROWS_AS(parse_solver("magic"), ContractError);
}

TEST_CASE("run_instance dispatch") {
  const auto ch = generate_channels(5, 0, 3, 6);
  const InstanceParams params;
  const auto row = run_instance(ch, SolverKind::BB, PhaseConstraint::binary(), params);
  CHECK(row.objective == solve_binary(ch).objective);
  CHECK(row.wall_time == 0.0);
  CHECK(row.constraint == "binary");

  for (std::uint64_t t = 0; t < 10; ++t) {
    const auto c = generate_channels(5, t, 3, 5);
    const auto bb = run_instance(c, SolverKind::BB, PhaseConstraint::mary(4), params);
    const auto ao = run_instance(c, SolverKind::AO, PhaseConstraint::mary(4), params);
    CHECK(ao.objective >= bb.objective - 1e-9);
    const auto oracle = run_instance(c, SolverKind::Oracle, PhaseConstraint::mary(4), params);
    CHECK(oracle.objective == doctest::Approx(bb.objective).epsilon(1e-12));
  }
}

TEST_CASE("run_instance records a nulled user") {
  const ChannelSet ch({vec({1.0, 1.0}), vec({0.0, 0.0})}, 1.0);
  const auto row = run_instance(ch, SolverKind::BB, PhaseConstraint::binary(), {});
  CHECK(row.status == SolveStatus::Infeasible);
  CHECK(row.objective == kInfinity);
  std::ostringstream os;
  write_sweep_csv(os, {row});
  CHECK(os.str().find(",inf,") != std::string::npos);
}

TEST_CASE("run_instance captures errors in the row") {
  const auto ch = generate_channels(1, 0, 2, 10);
  const auto row = run_instance(ch, SolverKind::Oracle, PhaseConstraint::continuous(), {});
  CHECK(row.status == SolveStatus::Degraded);
  CHECK_FALSE(row.error.empty());
}

TEST_CASE("run_sweep shape, order and pairing") {
  SweepConfig cfg;
  cfg.trials = 3;
  cfg.antenna_values = {2, 3};
  cfg.user_values = {2};
  cfg.modes = {{SolverKind::BB, PhaseConstraint::binary(), 0}};
  CHECK(run_sweep(cfg, 1).size() == 6);

  cfg.modes.push_back({SolverKind::AO, PhaseConstraint::binary(), 0});
  cfg.modes.push_back({SolverKind::BB, PhaseConstraint::continuous(), 2});
  const auto rows = run_sweep(cfg, 2);
  CHECK(rows.size() == 3 * (2 * 2 + 1));
  CHECK(rows[0].trial == 0);
  CHECK(rows.back().trial == 2);
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    CHECK(std::tie(rows[i].trial, rows[i].antennas) <= std::tie(rows[i + 1].trial, rows[i + 1].antennas));
  }
  // bb and ao rows of one cell saw the same channels, so bb never loses
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    if (rows[i].solver == SolverKind::BB && rows[i + 1].solver == SolverKind::AO &&
        rows[i].constraint == rows[i + 1].constraint) {
      CHECK(rows[i].objective <= rows[i + 1].objective + 1e-9);
    }
  }
  const auto again = run_sweep(cfg, 1);
  std::ostringstream a, b;
  write_sweep_csv(a, rows);
  write_sweep_csv(b, again);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("trial,N,K,solver,constraint,objective,snr_floor,gap,nodes,wall_time_s\n", 0) == 0);
}

TEST_CASE("format_real") {
  CHECK(format_real(kInfinity) == "inf");
  CHECK(format_real(0.25) == "0.25");
  CHECK(format_real(1.0 / 3.0) == "0.333333333333");
}

TEST_CASE("channel JSON round trip") {
  const auto ch = generate_channels(2, 1, 3, 4, 0.5);
  const auto back = channels_from_json(channels_to_json(ch));
  CHECK(back.sigma2() == 0.5);
  for (int k = 0; k < 3; ++k) CHECK(back.channel(k) == ch.channel(k));
  auto j = channels_to_json(ch);
  j["N"] = 5;
  CHECK_THROWS(channels_from_json(j));
}

TEST_CASE("solution JSON") {
  const ChannelSet ch({vec({1.0, 1.0}), vec({0.0, 0.0})}, 1.0);
  const auto j = solution_to_json(solve_binary(ch));
  CHECK(j["objective"] == "inf");
  CHECK(j["status"] == "infeasible");
  const auto ok = solution_to_json(solve_binary(ChannelSet({vec({1.0, 1.0})}, 1.0)));
  CHECK(ok["objective"].get<double>() == doctest::Approx(0.25));
  CHECK(ok["phases"].size() == 2);
}

TEST_CASE("sweep config JSON") {
  const auto j = nlohmann::json::parse(R"({
    "seed": 4, "trials": 2, "N_values": [2, 3], "K_values": [2],
    "power_dbm": 10, "sigma2": 1.0,
    "modes": [{"solver": "bb", "constraint": "mary", "M": 4},
              {"solver": "ao", "constraint": "continuous", "max_N": 2}]
  })");
  const auto cfg = sweep_config_from_json(j);
  CHECK(cfg.seed == 4);
  CHECK(cfg.trials == 2);
  CHECK(cfg.total_power == doctest::Approx(10.0));
  CHECK(cfg.modes.size() == 2);
  CHECK(cfg.modes[0].constraint.tag() == "mary4");
  CHECK(cfg.modes[1].max_antennas == 2);
  CHECK(dbm_to_linear(20.0) == doctest::Approx(100.0));
  CHECK_THROWS(sweep_config_from_json(nlohmann::json::parse(R"({"trials": 0})")));
}
