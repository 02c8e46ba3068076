/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "maxmin_beam/errors.hpp"
#include "maxmin_beam/model.hpp"
#include "maxmin_beam/numerics.hpp"
#include "test_support.hpp"

using namespace maxmin_beam;
using maxmin_beam::testing::random_channels;
using maxmin_beam::testing::random_phases;
using maxmin_beam::testing::vec;

namespace {

ChannelSet ones2() { return ChannelSet({vec({1.0, 1.0})}, 1.0); }

// Best min_k P_k G_k found on a uniform grid of the simplex edge between
// user 0 and the rest; used for K = 2 only.
double grid_best_two_users(double g0, double g1, double p, int points) {
  double best = 0.0;
  for (int i = 0; i <= points; ++i) {
    const double p0 = p * i / points;
    best = std::max(best, std::min(p0 * g0, (p - p0) * g1));
  }
  return best;
}

}  // namespace

TEST_CASE("ChannelSet validation") {
  CHECK_THROWS_AS(ChannelSet({}, 1.0), ContractError);
  CHECK_THROWS_AS(ChannelSet({vec({1.0}), vec({1.0, 2.0})}, 1.0), DimensionError);
  CHECK_THROWS_AS(ChannelSet({vec({1.0})}, 0.0), ContractError);
  const auto ch = ones2();
  CHECK(ch.users() == 1);
  CHECK(ch.antennas() == 2);
  CHECK(ch.gram().isApprox(ComplexMatrix::Ones(2, 2)));
}

TEST_CASE("PhaseConstraint tags") {
  CHECK(PhaseConstraint::binary().tag() == "binary");
  CHECK(PhaseConstraint::mary(4).tag() == "mary4");
  CHECK(PhaseConstraint::mary(2).kind() == PhaseConstraint::Kind::Binary);
  CHECK(PhaseConstraint::continuous().tag() == "continuous");
  CHECK_FALSE(PhaseConstraint::continuous().is_discrete());
  CHECK_THROWS_AS(PhaseConstraint::mary(1), ContractError);
}

TEST_CASE("Beamformer construction") {
  const std::vector<int> lv = {0, 1, 2, 3};
  const auto w = Beamformer::from_levels(lv, 4);
  CHECK(w.weights()(0) == Complex(1.0, 0.0));
  CHECK(w.weights()(1) == Complex(0.0, 1.0));
  CHECK(w.weights()(2) == Complex(-1.0, 0.0));
  CHECK(w.weights()(3) == Complex(0.0, -1.0));

  const std::vector<double> th = {1.0, 2.5, 0.25};
  const auto a = Beamformer::from_phases(th).anchored();
  CHECK(a.phases()[0] == 0.0);
  CHECK(a.phases()[1] == doctest::Approx(1.5));
  CHECK(a.phases()[2] == doctest::Approx(kTwoPi - 0.75));
  CHECK(wrap_phase(-0.5) == doctest::Approx(kTwoPi - 0.5));
  CHECK(wrap_phase(kTwoPi) == doctest::Approx(0.0));
}

TEST_CASE("objective examples") {
  const auto ch = ones2();
  const std::vector<double> aligned = {0.0, 0.0};
  const std::vector<double> opposed = {0.0, kPi};
  CHECK(objective(Beamformer::from_phases(aligned), ch) == doctest::Approx(0.25));
  CHECK(objective(Beamformer::from_phases(opposed), ch) == kInfinity);
}

TEST_CASE("objective matches the quadratic-form oracle and is phase invariant") {
  auto rng = CounterRng::keyed({21});
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto ch = random_channels(seed, 1 + static_cast<int>(seed % 4), 2 + static_cast<int>(seed % 6));
    const auto theta = random_phases(rng, ch.antennas());
    const auto w = Beamformer::from_phases(theta);
    double oracle = 0.0;
    for (int k = 0; k < ch.users(); ++k) {
      oracle += 1.0 / quadratic_form(w.weights(), outer_hermitian(ch.channel(k)));
    }
    const double f = objective(w, ch);
    CHECK(f == doctest::Approx(oracle).epsilon(1e-10));
    auto shifted = theta;
    const double c = kTwoPi * rng.uniform();
    for (auto& t : shifted) t += c;
    CHECK(objective(Beamformer::from_phases(shifted), ch) == doctest::Approx(f).epsilon(1e-10));
    CHECK(objective(w.anchored(), ch) == doctest::Approx(f).epsilon(1e-10));
  }
}

TEST_CASE("effective_gains") {
  const std::vector<double> aligned = {0.0, 0.0};
  const auto g = effective_gains(Beamformer::from_phases(aligned), ones2());
  CHECK(g[0] == doctest::Approx(2.0));

  const ChannelSet single({vec({Complex(0.6, -0.8) * 3.0})}, 2.0);
  for (double t : {0.0, 1.0, 4.0}) {
    const std::vector<double> th = {t};
    CHECK(effective_gains(Beamformer::from_phases(th), single)[0] == doctest::Approx(4.5));
  }

  auto rng = CounterRng::keyed({22});
  const auto ch = random_channels(3, 3, 5, 0.7);
  const auto w = Beamformer::from_phases(random_phases(rng, 5));
  const auto gains = effective_gains(w, ch);
  for (int k = 0; k < 3; ++k) {
    const double term = 1.0 / std::norm(ch.channel(k).dot(w.weights()));
    CHECK(gains[static_cast<std::size_t>(k)] == doctest::Approx(1.0 / term / (5 * 0.7)).epsilon(1e-12));
  }
}

TEST_CASE("allocate_power examples") {
  std::vector<double> g = {1.0, 1.0};
  auto a = allocate_power(g, 10.0);
  CHECK(a.powers[0] == doctest::Approx(5.0));
  CHECK(a.powers[1] == doctest::Approx(5.0));
  CHECK(a.t_star == doctest::Approx(5.0));

  g = {1.0, 4.0};
  a = allocate_power(g, 10.0);
  CHECK(a.powers[0] == doctest::Approx(8.0));
  CHECK(a.powers[1] == doctest::Approx(2.0));
  CHECK(a.t_star == doctest::Approx(8.0));
  CHECK(grid_best_two_users(1.0, 4.0, 10.0, 1000) == doctest::Approx(8.0));

  g = {3.0};
  a = allocate_power(g, 2.0);
  CHECK(a.powers[0] == doctest::Approx(2.0));
  CHECK(a.t_star == doctest::Approx(6.0));

  g = {1.0, 0.0};
  CHECK_THROWS_AS(allocate_power(g, 10.0), InfeasibleUserError);
  g = {1.0};
  CHECK_THROWS_AS(allocate_power(g, -1.0), ContractError);
}

TEST_CASE("allocate_power equalizes SNR and is optimal against a power-split grid") {
  auto rng = CounterRng::keyed({23});
  for (int trial = 0; trial < 200; ++trial) {
    const int k_users = 2 + trial % 3;
    std::vector<double> g(static_cast<std::size_t>(k_users));
    for (auto& x : g) x = 0.05 + 5.0 * rng.uniform();
    const double p = 0.5 + 20.0 * rng.uniform();
    const auto a = allocate_power(g, p);
    double lo = kInfinity, hi = 0.0;
    for (int k = 0; k < k_users; ++k) {
      const double snr = a.powers[static_cast<std::size_t>(k)] * g[static_cast<std::size_t>(k)];
      lo = std::min(lo, snr);
      hi = std::max(hi, snr);
    }
    CHECK(hi - lo <= 1e-9 * a.t_star);
    CHECK(std::accumulate(a.powers.begin(), a.powers.end(), 0.0) == doctest::Approx(p).epsilon(1e-12));
    // random splits never beat t*
    for (int s = 0; s < 50; ++s) {
      std::vector<double> split(static_cast<std::size_t>(k_users));
      double total = 0.0;
      for (auto& x : split) total += (x = rng.uniform());
      double worst = kInfinity;
      for (int k = 0; k < k_users; ++k) {
        worst = std::min(worst, p * split[static_cast<std::size_t>(k)] / total * g[static_cast<std::size_t>(k)]);
      }
      CHECK(worst <= a.t_star * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("snr_floor") {
  CHECK(snr_floor(0.25, 10.0, 2, 1.0) == doctest::Approx(20.0));
  const std::vector<double> aligned = {0.0, 0.0};
  const auto g = effective_gains(Beamformer::from_phases(aligned), ones2());
  CHECK(allocate_power(g, 10.0).t_star == doctest::Approx(20.0));
  CHECK(snr_floor(kInfinity, 10.0, 2, 1.0) == 0.0);
  CHECK(snr_floor(1.0, 1.0, 1, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("make_solution flags nulled users") {
  const std::vector<double> opposed = {0.0, kPi};
  const auto s = make_solution(Beamformer::from_phases(opposed), ones2(), 10.0, {});
  CHECK(s.objective == kInfinity);
  CHECK(s.snr_floor == 0.0);
  CHECK(s.status == SolveStatus::Infeasible);
  CHECK(s.powers == std::vector<double>{0.0});

  const std::vector<double> aligned = {0.0, 0.0};
  const auto ok = make_solution(Beamformer::from_phases(aligned), ones2(), 10.0, {});
  CHECK(ok.objective == doctest::Approx(0.25));
  CHECK(ok.snr_floor == doctest::Approx(20.0));
  CHECK(ok.powers[0] == doctest::Approx(10.0));
}

TEST_CASE("power scaling leaves the split shape unchanged") {
  const std::vector<double> g = {0.3, 1.7, 2.2};
  const auto a = allocate_power(g, 4.0);
  const auto b = allocate_power(g, 12.0);
  CHECK(b.t_star == doctest::Approx(3.0 * a.t_star));
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(b.powers[k] == doctest::Approx(3.0 * a.powers[k]));
  CHECK(a.powers[0] == doctest::Approx(a.t_star / g[0]));
}
