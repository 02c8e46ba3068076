/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include <doctest.h>

#include "maxmin_beam/baselines.hpp"
#include "maxmin_beam/bb_binary.hpp"
#include "test_support.hpp"

using namespace maxmin_beam;
using maxmin_beam::testing::random_channels;
using maxmin_beam::testing::vec;

namespace {

// max of w^T R w over all sign completions of the prefix
double max_completion_energy(const BinaryNode& node, const ComplexMatrix& r) {
  const int n = static_cast<int>(r.rows());
  const int free = n - node.depth();
  double best = -kInfinity;
  for (std::uint32_t mask = 0; mask < (1u << free); ++mask) {
    ComplexVector w(n);
    for (int i = 0; i < node.depth(); ++i) w(i) = node.fixed_signs[static_cast<std::size_t>(i)];
    for (int i = 0; i < free; ++i) w(node.depth() + i) = (mask >> i) & 1u ? -1.0 : 1.0;
    best = std::max(best, (w.adjoint() * r * w)(0, 0).real());
  }
  return best;
}

}  // namespace

TEST_CASE("binary_node_ub worked examples") {
  const ChannelSet one({vec({1.0, 1.0})}, 1.0);
  const auto r1 = binary_gram(one);
  const BinaryNode root{{1}};
  CHECK(binary_node_ub(root, r1) == doctest::Approx(4.0));
  CHECK(max_completion_energy(root, r1) == doctest::Approx(4.0));

  const ChannelSet two({vec({1.0, 1.0}), vec({2.0, 1.0})}, 1.0);
  const auto r2 = binary_gram(two);
  CHECK(r2(0, 0).real() == doctest::Approx(5.0));
  CHECK(r2(0, 1).real() == doctest::Approx(3.0));
  CHECK(binary_node_ub(root, r2) == doctest::Approx(13.0));
  // completion [+1,+1] attains 5 + 6 + 2
  CHECK(max_completion_energy(root, r2) == doctest::Approx(13.0));

  ComplexMatrix diag = ComplexMatrix::Zero(3, 3);
  diag.diagonal() << 2.0, 2.0, 2.0;
  CHECK(binary_node_ub(root, diag) == doctest::Approx(6.0));
  CHECK(binary_node_ub(BinaryNode{{1, -1}}, diag) == doctest::Approx(6.0));
  // unequal diagonal: every completion gives the trace, the bound overshoots
  diag.diagonal() << 1.0, 2.0, 3.0;
  CHECK(binary_node_ub(root, diag) == doctest::Approx(7.0));
  CHECK(max_completion_energy(root, diag) == doctest::Approx(6.0));
}

TEST_CASE("binary_node_lb") {
  CHECK(binary_node_lb(4.0, 1) == doctest::Approx(0.25));
  CHECK(binary_node_lb(13.0, 2) == doctest::Approx(4.0 / 13.0));
  CHECK(binary_node_lb(0.0, 2) == kInfinity);

  // the subtree optimum on the two-user example is 1/9 + 1/4 = 13/36
  const ChannelSet two({vec({1.0, 1.0}), vec({2.0, 1.0})}, 1.0);
  const double best = brute_force_discrete(two, 2).objective;
  CHECK(best == doctest::Approx(13.0 / 36.0));
  CHECK(binary_node_lb(13.0, 2) <= best);

  // identical users: bound is attained at the best leaf
  const auto h = vec({1.0, 0.5, -0.25});
  const ChannelSet same({h, h, h}, 1.0);
  const auto r = binary_gram(same);
  const BinaryNode leaf{{1, 1, -1}};
  ComplexVector w(3);
  w << 1.0, 1.0, -1.0;
  CHECK(binary_node_lb((w.adjoint() * r * w)(0, 0).real(), 3) == doctest::Approx(objective(w, same)));
}

TEST_CASE("binary bound holds for random completions") {
  auto rng = CounterRng::keyed({41});
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int n = 2 + static_cast<int>(seed % 7);
    const auto ch = random_channels(seed + 300, 1 + static_cast<int>(seed % 4), n);
    const auto r = binary_gram(ch);
    for (int d = 1; d < n; ++d) {
      BinaryNode node{{1}};
      for (int i = 1; i < d; ++i) node.fixed_signs.push_back(rng.uniform() < 0.5 ? 1 : -1);
      const double lb = binary_node_lb(binary_node_ub(node, r), ch.users());
      for (int c = 0; c < 20; ++c) {
        ComplexVector w(n);
        for (int i = 0; i < n; ++i) {
          w(i) = i < d ? node.fixed_signs[static_cast<std::size_t>(i)] : (rng.uniform() < 0.5 ? 1.0 : -1.0);
        }
        CHECK(lb <= objective(w, ch) + 1e-12);
      }
    }
  }
}

TEST_CASE("solve_binary examples") {
  const ChannelSet one({vec({1.0, 1.0})}, 1.0);
  const auto s = solve_binary(one);
  CHECK(s.objective == doctest::Approx(0.25));
  CHECK(s.beamformer.weights()(1).real() == doctest::Approx(1.0));
  CHECK(s.certificate.gap == 0.0);

  const ChannelSet two({vec({1.0, 1.0, 1.0}), vec({1.0, -1.0, 1.0})}, 1.0);
  CHECK(solve_binary(two).objective == doctest::Approx(brute_force_discrete(two, 2).objective).epsilon(1e-12));

  const ChannelSet single({vec({Complex(0.0, 2.0)})}, 1.0);
  CHECK(solve_binary(single).objective == doctest::Approx(0.25));
}

TEST_CASE("solve_binary matches exhaustive search with and without warm start") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int n = 2 + static_cast<int>(seed % 9);
    const auto ch = random_channels(seed + 500, 1 + static_cast<int>(seed % 4), n);
    const double oracle = brute_force_discrete(ch, 2).objective;
    CHECK(solve_binary(ch).objective == doctest::Approx(oracle).epsilon(1e-12));
    BinaryOptions cold;
    cold.warm_start = false;
    const auto s = solve_binary(ch, cold);
    CHECK(s.objective == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(s.certificate.global_lower_bound == doctest::Approx(s.objective).epsilon(1e-12));
  }
}

TEST_CASE("solve_binary reports a fully nulled user") {
  const ChannelSet ch({vec({1.0, 1.0}), vec({0.0, 0.0})}, 1.0);
  const auto s = solve_binary(ch);
  CHECK(s.objective == kInfinity);
  CHECK(s.snr_floor == 0.0);
  CHECK(s.status == SolveStatus::Infeasible);
}
