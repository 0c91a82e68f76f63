#include "abflux/config.hpp"

#include <fstream>
#include <set>

#include "abflux/errors.hpp"

namespace abflux {
namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw DomainError("config: '" + where + "' must be an object");
  for (const auto& [key, _] : j.items())
    if (!known.contains(key)) throw DomainError("config: unknown key '" + where + "." + key + "'");
}

template <class T>
void read(const json& j, const char* key, T& into) {
  if (const auto it = j.find(key); it != j.end()) into = it->get<T>();
}

}  // namespace

void RunConfig::validate() const {
  geometry.validate();
  flux.validate();
  sample.validate();
  if (grids.screen_points < 2) throw DomainError("config: grids.screen_points must be >= 2");
  if (grids.param_points < 2) throw DomainError("config: grids.param_points must be >= 2");
  if (grids.theta_points < 2 || grids.phi_points < 2)
    throw DomainError("config: grids.theta_points and grids.phi_points must be >= 2");
}

RunConfig config_from_json(const json& j) {
  RunConfig cfg;
  try {
    reject_unknown(j, {"geometry", "flux", "sample", "grids", "workers"}, "");
    if (const auto it = j.find("geometry"); it != j.end()) {
      reject_unknown(*it, {"source_to_slit_m", "slit_to_screen_m", "slit_half_width_m",
                           "slit_separation_m", "wavelength_m"}, "geometry");
      read(*it, "source_to_slit_m", cfg.geometry.source_to_slit);
      read(*it, "slit_to_screen_m", cfg.geometry.slit_to_screen);
      read(*it, "slit_half_width_m", cfg.geometry.slit_half_width);
      read(*it, "slit_separation_m", cfg.geometry.slit_separation);
      read(*it, "wavelength_m", cfg.geometry.wavelength);
    }
    if (const auto it = j.find("flux"); it != j.end()) {
      reject_unknown(*it, {"theta", "omega", "phi"}, "flux");
      read(*it, "theta", cfg.flux.theta);
      read(*it, "omega", cfg.flux.omega);
      read(*it, "phi", cfg.flux.phi);
    }
    if (const auto it = j.find("sample"); it != j.end()) {
      reject_unknown(*it, {"window_m", "grid_points", "n_hits", "seed"}, "sample");
      if (const auto w = it->find("window_m"); w != it->end()) {
        if (!w->is_array() || w->size() != 2)
          throw DomainError("config: sample.window_m must be [x_min, x_max]");
        cfg.sample.window = {(*w)[0].get<double>(), (*w)[1].get<double>()};
      }
      read(*it, "grid_points", cfg.sample.grid_points);
      read(*it, "n_hits", cfg.sample.n_hits);
      read(*it, "seed", cfg.sample.seed);
    }
    if (const auto it = j.find("grids"); it != j.end()) {
      reject_unknown(*it, {"screen_points", "param_points", "theta_points", "phi_points"}, "grids");
      read(*it, "screen_points", cfg.grids.screen_points);
      read(*it, "param_points", cfg.grids.param_points);
      read(*it, "theta_points", cfg.grids.theta_points);
      read(*it, "phi_points", cfg.grids.phi_points);
    }
    read(j, "workers", cfg.workers);
  } catch (const json::exception& e) {
    throw DomainError(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

nlohmann::json config_to_json(const RunConfig& cfg) {
  return {
      {"geometry",
       {{"source_to_slit_m", cfg.geometry.source_to_slit},
        {"slit_to_screen_m", cfg.geometry.slit_to_screen},
        {"slit_half_width_m", cfg.geometry.slit_half_width},
        {"slit_separation_m", cfg.geometry.slit_separation},
        {"wavelength_m", cfg.geometry.wavelength}}},
      {"flux", {{"theta", cfg.flux.theta}, {"omega", cfg.flux.omega}, {"phi", cfg.flux.phi}}},
      {"sample",
       {{"window_m", {cfg.sample.window.x_min, cfg.sample.window.x_max}},
        {"grid_points", cfg.sample.grid_points},
        {"n_hits", cfg.sample.n_hits},
        {"seed", cfg.sample.seed}}},
      {"grids",
       {{"screen_points", cfg.grids.screen_points},
        {"param_points", cfg.grids.param_points},
        {"theta_points", cfg.grids.theta_points},
        {"phi_points", cfg.grids.phi_points}}},
      {"workers", cfg.workers},
  };
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open config");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string(), 0, e.what());
  }
  return config_from_json(j);
}

}  // namespace abflux
