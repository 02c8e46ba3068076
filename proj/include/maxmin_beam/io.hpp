/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <string>

#include <json.hpp>

#include "maxmin_beam/harness.hpp"
#include "maxmin_beam/model.hpp"

namespace maxmin_beam {

/// {"N", "K", "sigma2", "channels": [[[re, im], ...], ...]}
nlohmann::json channels_to_json(const ChannelSet& ch);
ChannelSet channels_from_json(const nlohmann::json& j);

/// Phases, weights, objective ("inf" when infinite), powers, snr_floor, gap,
/// lower_bound, nodes_explored and status.
nlohmann::json solution_to_json(const Solution& s);

/// Accepts the SweepConfig fields; "modes" entries are
/// {"solver": "bb"|"ao"|"oracle", "constraint": "binary"|"mary"|"continuous", "M": int, "max_N": int}.
/// Power is given as "P" (linear) or "power_dbm".
SweepConfig sweep_config_from_json(const nlohmann::json& j);

/// 10^(dbm / 10), so 10 dBm maps to 10 in the noise-normalized unit.
double dbm_to_linear(double dbm);

nlohmann::json read_json_file(const std::string& path);
/// Writes j.dump(2) plus a trailing newline.
void write_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace maxmin_beam
