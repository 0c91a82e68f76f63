#pragma once

#include <cstddef>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "abflux/montecarlo.hpp"

namespace abflux {

struct GridConfig {
  std::size_t screen_points = 512;  // x samples for pattern and figure grids
  std::size_t param_points = 256;   // phi or theta samples per figure panel
  std::size_t theta_points = 181;   // likelihood scan
  std::size_t phi_points = 181;
};

// Everything a command needs. Defaults reproduce the reference figures.
struct RunConfig {
  ApertureGeometry geometry = kJonssonGeometry;
  FluxState flux;
  SampleConfig sample{Window{}, kDefaultSamplerGridPoints, 10000, 1};
  GridConfig grids;
  unsigned workers = 0;  // 0: available parallelism

  void validate() const;
};

// Unknown keys are rejected so that typos do not silently fall back to
// defaults. Missing keys keep their defaults.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& cfg);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace abflux
