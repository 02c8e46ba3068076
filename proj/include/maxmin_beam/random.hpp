/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>
#include <initializer_list>

namespace maxmin_beam {

/// Counter-based generator: draw i of stream `key` is splitmix64(key + (i+1) * 0x9E3779B97F4A7C15).
///
/// Streams are keyed by folding integers through the same finalizer, so any
/// (seed, trial, K, N) tuple addresses an independent reproducible sequence.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}
  static CounterRng keyed(std::initializer_list<std::uint64_t> parts);

  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal via Box-Muller on two uniforms; the sine branch is cached.
  double normal();

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace maxmin_beam
