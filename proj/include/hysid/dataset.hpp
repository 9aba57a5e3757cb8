#pragma once

#include "hysid/signal.hpp"

#include <nlohmann/json_fwd.hpp>

#include <string>
#include <tuple>

namespace hysid {

/// Writes `time_s,u,y` rows at full round-trip precision plus a JSON sidecar
/// (path + ".meta.json") carrying `metadata` and a format-version field.
void write_dataset(const std::string& path, const Signal& u, const Signal& y,
                   const nlohmann::json& metadata);

/// Reads a dataset written by write_dataset. Validates column count per row
/// and a uniform time base (1e-9 relative jitter); errors name the line.
/// The sidecar is optional; absent means empty metadata.
std::tuple<Signal, Signal, nlohmann::json> read_dataset(const std::string& path);

}  // namespace hysid
