/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "maxmin_beam/io.hpp"

#include <cmath>
#include <fstream>

#include "maxmin_beam/errors.hpp"

namespace maxmin_beam {

namespace {

nlohmann::json real_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

PhaseConstraint constraint_from(const std::string& tag, int levels) {
  if (tag == "binary") return PhaseConstraint::binary();
  if (tag == "mary") return PhaseConstraint::mary(levels);
  if (tag == "continuous") return PhaseConstraint::continuous();
  if (tag.rfind("mary", 0) == 0) return PhaseConstraint::mary(std::stoi(tag.substr(4)));
  throw ContractError("unknown constraint '" + tag + "'");
}

}  // namespace

nlohmann::json channels_to_json(const ChannelSet& ch) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& h : ch.channels()) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index n = 0; n < h.size(); ++n) row.push_back({h(n).real(), h(n).imag()});
    rows.push_back(std::move(row));
  }
  return {{"N", ch.antennas()}, {"K", ch.users()}, {"sigma2", ch.sigma2()}, {"channels", rows}};
}

ChannelSet channels_from_json(const nlohmann::json& j) {
  try {
    const int n = j.at("N").get<int>();
    const int k = j.at("K").get<int>();
    const double sigma2 = j.value("sigma2", 1.0);
    const auto& rows = j.at("channels");
    if (!rows.is_array() || static_cast<int>(rows.size()) != k) {
      throw DimensionError("channel file: expected K channel rows");
    }
    std::vector<ComplexVector> h;
    for (const auto& row : rows) {
      if (!row.is_array() || static_cast<int>(row.size()) != n) {
        throw DimensionError("channel file: expected N entries per row");
      }
      ComplexVector hk(n);
      for (int i = 0; i < n; ++i) {
        const auto& e = row.at(static_cast<std::size_t>(i));
        hk(i) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
      }
      h.push_back(std::move(hk));
    }
    return ChannelSet(std::move(h), sigma2);
  } catch (const nlohmann::json::exception& e) {
    throw ContractError(std::string("channel file: ") + e.what());
  }
}

nlohmann::json solution_to_json(const Solution& s) {
  nlohmann::json weights = nlohmann::json::array();
  const auto& w = s.beamformer.weights();
  for (Eigen::Index n = 0; n < w.size(); ++n) weights.push_back({w(n).real(), w(n).imag()});
  return {{"status", to_string(s.status)},
          {"objective", real_or_inf(s.objective)},
          {"phases", s.beamformer.phases()},
          {"weights", weights},
          {"powers", s.powers},
          {"snr_floor", real_or_inf(s.snr_floor)},
          {"gap", real_or_inf(s.certificate.gap)},
          {"lower_bound", real_or_inf(s.certificate.global_lower_bound)},
          {"nodes_explored", s.certificate.nodes_explored}};
}

double dbm_to_linear(double dbm) { return std::pow(10.0, dbm / 10.0); }

SweepConfig sweep_config_from_json(const nlohmann::json& j) {
  try {
    SweepConfig cfg = default_sweep_config();
    cfg.seed = j.value("seed", cfg.seed);
    cfg.trials = j.value("trials", cfg.trials);
    cfg.antenna_values = j.value("N_values", cfg.antenna_values);
    cfg.user_values = j.value("K_values", cfg.user_values);
    if (j.contains("power_dbm")) cfg.total_power = dbm_to_linear(j.at("power_dbm").get<double>());
    cfg.total_power = j.value("P", cfg.total_power);
    cfg.sigma2 = j.value("sigma2", cfg.sigma2);
    cfg.epsilon = j.value("epsilon", cfg.epsilon);
    cfg.oracle_steps = j.value("oracle_steps", cfg.oracle_steps);
    cfg.record_timing = j.value("record_timing", cfg.record_timing);
    if (j.contains("modes")) cfg.modes.clear();
    for (const auto& m : j.value("modes", nlohmann::json::array())) {
      SweepMode mode;
      mode.solver = parse_solver(m.at("solver").get<std::string>());
      mode.constraint = constraint_from(m.at("constraint").get<std::string>(), m.value("M", 4));
      mode.max_antennas = m.value("max_N", 0);
      cfg.modes.push_back(mode);
    }
    if (cfg.trials < 1) throw ContractError("sweep config: trials must be at least 1");
    if (!(cfg.total_power > 0.0) || !(cfg.sigma2 > 0.0)) {
      throw ContractError("sweep config: P and sigma2 must be positive");
    }
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ContractError(std::string("sweep config: ") + e.what());
  }
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ContractError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ContractError("'" + path + "': " + e.what());
  }
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw ContractError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace maxmin_beam
