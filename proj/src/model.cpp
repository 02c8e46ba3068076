/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "maxmin_beam/model.hpp"

#include <cmath>
#include <numeric>

#include "maxmin_beam/errors.hpp"

namespace maxmin_beam {

ChannelSet::ChannelSet(std::vector<ComplexVector> channels, double sigma2)
    : channels_(std::move(channels)), sigma2_(sigma2) {
  if (channels_.empty()) throw ContractError("ChannelSet: need at least one user");
  const Eigen::Index n = channels_.front().size();
  if (n < 1) throw ContractError("ChannelSet: need at least one antenna");
  for (const auto& h : channels_) {
    if (h.size() != n) throw DimensionError("ChannelSet: channel vectors differ in length");
  }
  if (!(sigma2_ > 0.0) || !std::isfinite(sigma2_)) {
    throw ContractError("ChannelSet: sigma2 must be positive");
  }
  null_threshold_.reserve(channels_.size());
  for (const auto& h : channels_) {
    null_threshold_.push_back(1e-12 * h.squaredNorm() * static_cast<double>(n));
  }
}

ComplexMatrix ChannelSet::gram() const {
  const Eigen::Index n = antennas();
  ComplexMatrix r = ComplexMatrix::Zero(n, n);
  for (const auto& h : channels_) r += h * h.adjoint();
  return r;
}

PhaseConstraint PhaseConstraint::mary(int levels) {
  if (levels < 2) throw ContractError("PhaseConstraint: M must be at least 2");
  if (levels == 2) return binary();
  return PhaseConstraint(Kind::Mary, levels);
}

std::string PhaseConstraint::tag() const {
  switch (kind_) {
    case Kind::Binary:
      return "binary";
    case Kind::Mary:
      return "mary" + std::to_string(levels_);
    case Kind::Continuous:
      return "continuous";
  }
  return "unknown";
}

double wrap_phase(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

Complex level_weight(int m, int M) {
  m = ((m % M) + M) % M;
  if ((4 * m) % M == 0) {
    switch ((4 * m) / M) {
      case 0:
        return {1.0, 0.0};
      case 1:
        return {0.0, 1.0};
      case 2:
        return {-1.0, 0.0};
      default:
        return {0.0, -1.0};
    }
  }
  return std::polar(1.0, kTwoPi * m / M);
}

Beamformer Beamformer::from_phases(std::span<const double> theta) {
  Beamformer b;
  b.theta_.reserve(theta.size());
  b.w_.resize(static_cast<Eigen::Index>(theta.size()));
  for (std::size_t n = 0; n < theta.size(); ++n) {
    const double t = wrap_phase(theta[n]);
    b.theta_.push_back(t);
    b.w_(static_cast<Eigen::Index>(n)) = std::polar(1.0, t);
  }
  return b;
}

Beamformer Beamformer::from_levels(std::span<const int> levels, int M) {
  if (M < 2) throw ContractError("from_levels: M must be at least 2");
  Beamformer b;
  b.theta_.reserve(levels.size());
  b.w_.resize(static_cast<Eigen::Index>(levels.size()));
  for (std::size_t n = 0; n < levels.size(); ++n) {
    const int m = ((levels[n] % M) + M) % M;
    b.theta_.push_back(kTwoPi * m / M);
    b.w_(static_cast<Eigen::Index>(n)) = level_weight(m, M);
  }
  return b;
}

Beamformer Beamformer::anchored() const {
  if (theta_.empty() || theta_.front() == 0.0) return *this;
  const Complex rot = std::conj(w_(0));
  Beamformer b;
  b.theta_.reserve(theta_.size());
  b.w_ = w_ * rot;
  const double offset = theta_.front();
  for (double t : theta_) b.theta_.push_back(wrap_phase(t - offset));
  b.w_(0) = Complex(1.0, 0.0);
  return b;
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal:
      return "optimal";
    case SolveStatus::Degraded:
      return "degraded";
    case SolveStatus::Infeasible:
      return "infeasible";
  }
  return "unknown";
}

double objective(const ComplexVector& w, const ChannelSet& ch) {
  if (w.size() != ch.antennas()) {
    throw DimensionError("objective: beamformer length does not match antenna count");
  }
  double f = 0.0;
  for (int k = 0; k < ch.users(); ++k) {
    const double gain = std::norm(ch.channel(k).dot(w));
    if (gain <= ch.null_threshold(k) || gain == 0.0) return kInfinity;
    f += 1.0 / gain;
  }
  return f;
}

double objective(const Beamformer& w, const ChannelSet& ch) {
  return objective(w.weights(), ch);
}

std::vector<double> effective_gains(const Beamformer& w, const ChannelSet& ch) {
  if (w.size() != ch.antennas()) {
    throw DimensionError("effective_gains: beamformer length does not match antenna count");
  }
  const double scale = 1.0 / (static_cast<double>(ch.antennas()) * ch.sigma2());
  std::vector<double> gains;
  gains.reserve(static_cast<std::size_t>(ch.users()));
  for (int k = 0; k < ch.users(); ++k) {
    const double gain = std::norm(ch.channel(k).dot(w.weights()));
    gains.push_back(gain <= ch.null_threshold(k) ? 0.0 : gain * scale);
  }
  return gains;
}

PowerAllocation allocate_power(std::span<const double> gains, double total_power) {
  if (gains.empty()) throw ContractError("allocate_power: no users");
  if (!(total_power > 0.0)) throw ContractError("allocate_power: P must be positive");
  double inverse_sum = 0.0;
  for (double g : gains) {
    if (!(g > 0.0)) {
      throw InfeasibleUserError("allocate_power: a user has zero effective gain");
    }
    inverse_sum += 1.0 / g;
  }
  PowerAllocation out;
  out.t_star = total_power / inverse_sum;
  out.powers.reserve(gains.size());
  for (double g : gains) out.powers.push_back((total_power / g) / inverse_sum);
  return out;
}

double snr_floor(double objective_value, double total_power, int antennas, double sigma2) {
  if (std::isinf(objective_value)) return 0.0;
  if (!(objective_value > 0.0) || !(total_power > 0.0) || antennas < 1 || !(sigma2 > 0.0)) {
    throw ContractError("snr_floor: inputs must be positive");
  }
  return total_power / (static_cast<double>(antennas) * sigma2 * objective_value);
}

Solution make_solution(const Beamformer& w, const ChannelSet& ch, double total_power,
                       Certificate certificate, SolveStatus status) {
  Solution s;
  s.beamformer = w;
  s.objective = objective(w, ch);
  s.certificate = certificate;
  s.status = status;
  if (std::isinf(s.objective)) {
    s.powers.assign(static_cast<std::size_t>(ch.users()), 0.0);
    s.snr_floor = 0.0;
    s.status = SolveStatus::Infeasible;
    return s;
  }
  const auto gains = effective_gains(w, ch);
  auto alloc = allocate_power(gains, total_power);
  s.powers = std::move(alloc.powers);
  s.snr_floor = alloc.t_star;
  return s;
}

}  // namespace maxmin_beam
