/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "maxmin_beam/baselines.hpp"

#include <cmath>
#include <limits>

#include "maxmin_beam/errors.hpp"
#include "maxmin_beam/random.hpp"

namespace maxmin_beam {

namespace {

constexpr int kContinuousGrid = 64;
constexpr double kGoldenWidth = 1e-10;
constexpr std::uint64_t kEnumerationGuard = std::uint64_t{1} << 24;

// f as a function of one coordinate: Sum_k 1 / |a_k + b_k u|^2.
struct CoordinateObjective {
  const std::vector<Complex>& rest;
  const std::vector<Complex>& coeff;
  const ChannelSet& ch;

  double operator()(Complex u) const {
    double f = 0.0;
    for (std::size_t k = 0; k < rest.size(); ++k) {
      const double gain = std::norm(rest[k] + coeff[k] * u);
      if (gain <= ch.null_threshold(static_cast<int>(k)) || gain == 0.0) return kInfinity;
      f += 1.0 / gain;
    }
    return f;
  }
  double at_phase(double theta) const { return (*this)(std::polar(1.0, theta)); }
};

double golden_section(const CoordinateObjective& f, double lo, double hi) {
  const double inv_phi = 0.6180339887498948482;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f.at_phase(x1);
  double f2 = f.at_phase(x2);
  while (hi - lo > kGoldenWidth) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f.at_phase(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f.at_phase(x2);
    }
  }
  return 0.5 * (lo + hi);
}

int nearest_level(double theta, int M) {
  const long m = std::lround(wrap_phase(theta) * M / kTwoPi);
  return static_cast<int>(m % M);
}

struct AoRun {
  Beamformer beamformer;
  double objective = kInfinity;
  std::uint64_t updates = 0;
};

AoRun run_discrete(const ChannelSet& ch, int M, std::vector<int> levels,
                   const AoConfig& cfg) {
  const int n_ant = ch.antennas();
  const int n_users = ch.users();
  std::vector<Complex> sums(static_cast<std::size_t>(n_users));
  std::vector<Complex> rest(sums.size());
  std::vector<Complex> coeff(sums.size());
  std::vector<Complex> alphabet;
  for (int m = 0; m < M; ++m) alphabet.push_back(level_weight(m, M));

  AoRun run;
  double f = objective(Beamformer::from_levels(levels, M), ch);
  for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    const double before = f;
    const Beamformer current = Beamformer::from_levels(levels, M);
    for (int k = 0; k < n_users; ++k) {
      sums[static_cast<std::size_t>(k)] = ch.channel(k).dot(current.weights());
    }
    for (int n = 0; n < n_ant; ++n) {
      const Complex wn = alphabet[static_cast<std::size_t>(levels[static_cast<std::size_t>(n)])];
      for (int k = 0; k < n_users; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        coeff[uk] = std::conj(ch.channel(k)(n));
        rest[uk] = sums[uk] - coeff[uk] * wn;
      }
      const CoordinateObjective fn{rest, coeff, ch};
      int best = levels[static_cast<std::size_t>(n)];
      double best_f = fn(wn);
      for (int m = 0; m < M; ++m) {
        const double v = fn(alphabet[static_cast<std::size_t>(m)]);
        if (v < best_f) {
          best_f = v;
          best = m;
        }
      }
      ++run.updates;
      levels[static_cast<std::size_t>(n)] = best;
      const Complex wb = alphabet[static_cast<std::size_t>(best)];
      for (std::size_t k = 0; k < sums.size(); ++k) sums[k] = rest[k] + coeff[k] * wb;
      f = best_f;
    }
    f = objective(Beamformer::from_levels(levels, M), ch);
    if (std::isinf(before) && std::isinf(f)) break;
    if (!std::isinf(before) && before - f < cfg.rel_tol * f) break;
  }
  // rotate so that w_1 = 1 while staying on the alphabet
  const int anchor = levels.front();
  for (int& m : levels) m = ((m - anchor) % M + M) % M;
  run.beamformer = Beamformer::from_levels(levels, M);
  run.objective = objective(run.beamformer, ch);
  return run;
}

AoRun run_continuous(const ChannelSet& ch, std::vector<double> theta, const AoConfig& cfg) {
  const int n_ant = ch.antennas();
  const int n_users = ch.users();
  std::vector<Complex> sums(static_cast<std::size_t>(n_users));
  std::vector<Complex> rest(sums.size());
  std::vector<Complex> coeff(sums.size());
  const double step = kTwoPi / kContinuousGrid;

  AoRun run;
  double f = objective(Beamformer::from_phases(theta), ch);
  for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    const double before = f;
    const Beamformer current = Beamformer::from_phases(theta);
    for (int k = 0; k < n_users; ++k) {
      sums[static_cast<std::size_t>(k)] = ch.channel(k).dot(current.weights());
    }
    for (int n = 0; n < n_ant; ++n) {
      const double tn = theta[static_cast<std::size_t>(n)];
      const Complex wn = std::polar(1.0, tn);
      for (int k = 0; k < n_users; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        coeff[uk] = std::conj(ch.channel(k)(n));
        rest[uk] = sums[uk] - coeff[uk] * wn;
      }
      const CoordinateObjective fn{rest, coeff, ch};
      double best_theta = tn;
      double best_f = fn(wn);
      int grid_best = 0;
      double grid_f = kInfinity;
      for (int i = 0; i < kContinuousGrid; ++i) {
        const double v = fn.at_phase(i * step);
        if (v < grid_f) {
          grid_f = v;
          grid_best = i;
        }
      }
      if (grid_f < best_f) {
        best_f = grid_f;
        best_theta = grid_best * step;
      }
      if (std::isfinite(grid_f)) {
        const double refined = golden_section(fn, (grid_best - 1) * step, (grid_best + 1) * step);
        const double v = fn.at_phase(refined);
        if (v < best_f) {
          best_f = v;
          best_theta = refined;
        }
      }
      ++run.updates;
      theta[static_cast<std::size_t>(n)] = wrap_phase(best_theta);
      const Complex wb = std::polar(1.0, theta[static_cast<std::size_t>(n)]);
      for (std::size_t k = 0; k < sums.size(); ++k) sums[k] = rest[k] + coeff[k] * wb;
      f = best_f;
    }
    f = objective(Beamformer::from_phases(theta), ch);
    if (std::isinf(before) && std::isinf(f)) break;
    if (!std::isinf(before) && before - f < cfg.rel_tol * f) break;
  }
  run.beamformer = Beamformer::from_phases(theta).anchored();
  run.objective = objective(run.beamformer, ch);
  return run;
}

std::vector<double> initial_phases(const ChannelSet& ch, const AoConfig& cfg, int restart) {
  const auto n = static_cast<std::size_t>(ch.antennas());
  std::vector<double> theta(n, 0.0);
  switch (cfg.init) {
    case AoConfig::Init::UniformRandom: {
      auto rng = CounterRng::keyed({cfg.seed, static_cast<std::uint64_t>(restart), 0xA0ULL});
      for (auto& t : theta) t = kTwoPi * rng.uniform();
      break;
    }
    case AoConfig::Init::MatchedToUser: {
      if (cfg.user < 0 || cfg.user >= ch.users()) {
        throw ContractError("ao_solve: matched user index out of range");
      }
      for (std::size_t i = 0; i < n; ++i) {
        theta[i] = wrap_phase(std::arg(ch.channel(cfg.user)(static_cast<Eigen::Index>(i))));
      }
      break;
    }
    case AoConfig::Init::Given:
      if (cfg.phases.size() != n) {
        throw DimensionError("ao_solve: given phases do not match antenna count");
      }
      theta = cfg.phases;
      break;
  }
  return theta;
}

// Lexicographic enumeration over coordinates 2..N drawn from `alphabet`, with w_1 = 1.
struct EnumerationResult {
  std::vector<int> indices;
  double objective = kInfinity;
  std::uint64_t evaluated = 0;
};

EnumerationResult enumerate_anchored(const ChannelSet& ch, const std::vector<Complex>& alphabet) {
  const int n_ant = ch.antennas();
  const int n_users = ch.users();
  const auto levels = static_cast<std::uint64_t>(alphabet.size());
  std::uint64_t total = 1;
  for (int n = 1; n < n_ant; ++n) {
    if (total > kEnumerationGuard / levels) {
      throw ResourceError("enumeration exceeds the 2^24 candidate guard");
    }
    total *= levels;
  }

  // partial[d][k] = sum over the first d coordinates
  std::vector<std::vector<Complex>> partial(static_cast<std::size_t>(n_ant) + 1,
                                            std::vector<Complex>(static_cast<std::size_t>(n_users)));
  std::vector<std::vector<Complex>> coeff(static_cast<std::size_t>(n_ant),
                                          std::vector<Complex>(static_cast<std::size_t>(n_users)));
  for (int n = 0; n < n_ant; ++n) {
    for (int k = 0; k < n_users; ++k) {
      coeff[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)] = std::conj(ch.channel(k)(n));
    }
  }
  partial[1] = coeff[0];

  EnumerationResult out;
  out.indices.assign(static_cast<std::size_t>(n_ant), 0);
  std::vector<int> idx(static_cast<std::size_t>(n_ant), 0);
  int depth = 1;
  // iterative DFS; idx[d] is the next alphabet entry to try at coordinate d
  std::vector<int> cursor(static_cast<std::size_t>(n_ant) + 1, 0);
  while (true) {
    if (depth == n_ant) {
      double f = 0.0;
      const auto& s = partial[static_cast<std::size_t>(n_ant)];
      for (int k = 0; k < n_users; ++k) {
        const double gain = std::norm(s[static_cast<std::size_t>(k)]);
        if (gain <= ch.null_threshold(k) || gain == 0.0) {
          f = kInfinity;
          break;
        }
        f += 1.0 / gain;
      }
      ++out.evaluated;
      if (f < out.objective || out.evaluated == 1) {
        if (f < out.objective) out.objective = f;
        out.indices = idx;
      }
      --depth;
      if (depth < 1) break;
      continue;
    }
    auto& c = cursor[static_cast<std::size_t>(depth)];
    if (c == static_cast<int>(alphabet.size())) {
      c = 0;
      --depth;
      if (depth < 1) break;
      continue;
    }
    idx[static_cast<std::size_t>(depth)] = c;
    const Complex u = alphabet[static_cast<std::size_t>(c)];
    auto& next = partial[static_cast<std::size_t>(depth) + 1];
    const auto& prev = partial[static_cast<std::size_t>(depth)];
    const auto& cf = coeff[static_cast<std::size_t>(depth)];
    for (std::size_t k = 0; k < next.size(); ++k) next[k] = prev[k] + cf[k] * u;
    ++c;
    ++depth;
  }
  return out;
}

}  // namespace

double trivial_lower_bound(const ChannelSet& ch) {
  double lb = 0.0;
  for (int k = 0; k < ch.users(); ++k) {
    const double amp = ch.channel(k).cwiseAbs().sum();
    if (amp == 0.0) return kInfinity;
    lb += 1.0 / (amp * amp);
  }
  return lb;
}

Solution ao_solve(const ChannelSet& ch, const PhaseConstraint& constraint, const AoConfig& cfg) {
  if (cfg.max_sweeps < 1) throw ContractError("ao_solve: max_sweeps must be at least 1");
  if (!(cfg.rel_tol > 0.0)) throw ContractError("ao_solve: rel_tol must be positive");
  const int restarts =
      cfg.init == AoConfig::Init::UniformRandom ? std::max(1, cfg.restarts) : 1;

  AoRun best;
  std::uint64_t updates = 0;
  for (int r = 0; r < restarts; ++r) {
    const auto theta = initial_phases(ch, cfg, r);
    AoRun run;
    if (constraint.is_discrete()) {
      const int M = constraint.levels();
      std::vector<int> levels;
      levels.reserve(theta.size());
      for (double t : theta) levels.push_back(nearest_level(t, M));
      run = run_discrete(ch, M, std::move(levels), cfg);
    } else {
      run = run_continuous(ch, theta, cfg);
    }
    updates += run.updates;
    if (r == 0 || run.objective < best.objective) best = std::move(run);
  }
  Certificate cert;
  cert.global_lower_bound = std::min(trivial_lower_bound(ch), best.objective);
  cert.gap = std::isinf(best.objective) ? kInfinity : best.objective - cert.global_lower_bound;
  cert.nodes_explored = updates;
  return make_solution(best.beamformer, ch, cfg.total_power, cert);
}

Solution brute_force_discrete(const ChannelSet& ch, int M, double total_power) {
  if (M < 2) throw ContractError("brute_force_discrete: M must be at least 2");
  std::vector<Complex> alphabet;
  for (int m = 0; m < M; ++m) alphabet.push_back(level_weight(m, M));
  const auto result = enumerate_anchored(ch, alphabet);
  Certificate cert;
  cert.global_lower_bound = result.objective;
  cert.gap = 0.0;
  cert.nodes_explored = result.evaluated;
  return make_solution(Beamformer::from_levels(result.indices, M), ch, total_power, cert);
}

Solution grid_oracle_continuous(const ChannelSet& ch, int steps_per_dim, double total_power) {
  if (steps_per_dim < 1) throw ContractError("grid_oracle_continuous: steps must be positive");
  std::vector<Complex> alphabet;
  for (int s = 0; s < steps_per_dim; ++s) {
    alphabet.push_back(std::polar(1.0, kTwoPi * s / steps_per_dim));
  }
  const auto result = enumerate_anchored(ch, alphabet);
  std::vector<double> theta;
  theta.reserve(result.indices.size());
  for (int i : result.indices) theta.push_back(kTwoPi * i / steps_per_dim);
  Certificate cert;
  cert.global_lower_bound = std::min(trivial_lower_bound(ch), result.objective);
  cert.gap = std::isinf(result.objective) ? kInfinity : result.objective - cert.global_lower_bound;
  cert.nodes_explored = result.evaluated;
  return make_solution(Beamformer::from_phases(theta), ch, total_power, cert);
}

}  // namespace maxmin_beam
