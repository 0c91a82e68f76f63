// Command-line front end: figure data, simulated hits, and inference runs.
//
// Exit codes: 0 success, 1 usage error, 2 domain/validation error, 3 I/O error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "abflux/commands.hpp"
#include "abflux/csv_io.hpp"
#include "abflux/errors.hpp"

namespace {

namespace fs = std::filesystem;
using namespace abflux;

enum ExitCode { kOk = 0, kUsage = 1, kDomain = 2, kIo = 3 };

// Command-line values that override the config file when given.
struct Overrides {
  std::optional<double> theta, phi, omega;
  std::optional<double> source_to_slit, slit_to_screen, slit_half_width, slit_separation, wavelength;
  std::optional<double> window_min, window_max;
  std::optional<std::size_t> sampler_points, n_hits, screen_points, param_points, theta_points, phi_points;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
};

void add_common(CLI::App& app, std::string& config_path, Overrides& o) {
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--theta", o.theta, "superposition angle theta [0, pi]");
  app.add_option("--phi", o.phi, "flux parameter magnitude");
  app.add_option("--omega", o.omega, "relative phase omega [0, 2 pi)");
  app.add_option("--source-to-slit", o.source_to_slit, "l, meters");
  app.add_option("--slit-to-screen", o.slit_to_screen, "L, meters");
  app.add_option("--slit-half-width", o.slit_half_width, "b, meters");
  app.add_option("--slit-separation", o.slit_separation, "x0, meters");
  app.add_option("--wavelength", o.wavelength, "de Broglie wavelength, meters");
  app.add_option("--window-min", o.window_min, "screen window lower edge, meters");
  app.add_option("--window-max", o.window_max, "screen window upper edge, meters");
  app.add_option("--sampler-points", o.sampler_points, "normalization/sampling grid size");
  app.add_option("--n-hits", o.n_hits, "number of simulated hits");
  app.add_option("--screen-points", o.screen_points, "x samples for pattern/figure grids");
  app.add_option("--param-points", o.param_points, "parameter samples per figure panel");
  app.add_option("--theta-points", o.theta_points, "likelihood scan points along theta");
  app.add_option("--phi-points", o.phi_points, "likelihood scan points along phi");
  app.add_option("--seed", o.seed, "random seed");
  app.add_option("--workers", o.workers, "worker threads (default: $ABFLUX_WORKERS or all cores)");
}

RunConfig resolve(const std::string& config_path, const Overrides& o) {
  RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
  if (!o.workers) {
    if (const char* env = std::getenv("ABFLUX_WORKERS"); env && *env) {
      try {
        cfg.workers = static_cast<unsigned>(std::stoul(env));
      } catch (const std::exception&) {
        throw DomainError(std::string("ABFLUX_WORKERS is not a number: ") + env);
      }
    }
  }
  auto set = [](auto& field, const auto& value) {
    if (value) field = *value;
  };
  set(cfg.flux.theta, o.theta);
  set(cfg.flux.phi, o.phi);
  set(cfg.flux.omega, o.omega);
  set(cfg.geometry.source_to_slit, o.source_to_slit);
  set(cfg.geometry.slit_to_screen, o.slit_to_screen);
  set(cfg.geometry.slit_half_width, o.slit_half_width);
  set(cfg.geometry.slit_separation, o.slit_separation);
  set(cfg.geometry.wavelength, o.wavelength);
  set(cfg.sample.window.x_min, o.window_min);
  set(cfg.sample.window.x_max, o.window_max);
  set(cfg.sample.grid_points, o.sampler_points);
  set(cfg.sample.n_hits, o.n_hits);
  set(cfg.sample.seed, o.seed);
  set(cfg.grids.screen_points, o.screen_points);
  set(cfg.grids.param_points, o.param_points);
  set(cfg.grids.theta_points, o.theta_points);
  set(cfg.grids.phi_points, o.phi_points);
  set(cfg.workers, o.workers);
  cfg.validate();
  return cfg;
}

std::vector<std::size_t> parse_schedule(const std::string& text) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw DomainError("bad checkpoint '" + item + "'");
    out.push_back(static_cast<std::size_t>(v));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-slit interference with a superposed enclosed flux"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  std::string config_path;
  Overrides o;
  std::string out = "pattern.csv";
  std::string out_dir = ".";
  std::string pgm;
  bool heatmaps = false;
  std::string hits_path;
  bool allow_mismatch = false;
  std::vector<double> thetas;
  std::vector<double> phis;
  std::string schedule;
  std::string dump_config;

  auto* pattern = app.add_subcommand("pattern", "screen density for one flux state");
  add_common(*pattern, config_path, o);
  pattern->add_option("-o,--out", out, "CSV output path");
  pattern->add_option("--pgm", pgm, "optional graymap strip");

  auto* figure3 = app.add_subcommand("figure3", "(x, phi) density panels for theta = 0, pi, pi/2");
  auto* figure4 = app.add_subcommand("figure4", "(x, theta) density panels for phi = pi/4, pi/2, pi");
  for (auto* fig : {figure3, figure4}) {
    add_common(*fig, config_path, o);
    fig->add_option("-d,--out-dir", out_dir, "output directory");
    fig->add_flag("--pgm", heatmaps, "also write 8-bit graymaps");
  }

  auto* simulate = app.add_subcommand("simulate", "generate simulated electron hits");
  add_common(*simulate, config_path, o);
  simulate->add_option("-o,--out", out, "hit CSV output path")->required();

  auto* infer = app.add_subcommand("infer", "maximum-likelihood (theta, phi) from a hit file");
  auto* disc = app.add_subcommand("discriminate", "superposition vs definite-flux likelihood ratio");
  auto* trace = app.add_subcommand("trace", "estimates and llr on growing hit prefixes");
  for (auto* cmd : {infer, disc, trace}) {
    add_common(*cmd, config_path, o);
    cmd->add_option("hits", hits_path, "hit CSV produced by simulate")->required();
    cmd->add_option("-o,--out", out, "CSV output path")->required();
    cmd->add_flag("--allow-provenance-mismatch", allow_mismatch,
                  "accept hit files whose geometry/window comments differ from the configuration");
  }
  trace->add_option("--checkpoints", schedule, "comma-separated increasing hit counts")->required();

  auto* sweep = app.add_subcommand("sweep", "pattern files for every (theta, phi) pair");
  add_common(*sweep, config_path, o);
  sweep->add_option("--thetas", thetas, "theta values")->required()->delimiter(',');
  sweep->add_option("--phis", phis, "phi values")->required()->delimiter(',');
  sweep->add_option("-d,--out-dir", out_dir, "output directory");

  auto* show = app.add_subcommand("config", "print the resolved configuration as JSON");
  add_common(*show, config_path, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    const RunConfig cfg = resolve(config_path, o);
    if (*pattern) {
      std::optional<fs::path> pgm_path;
      if (!pgm.empty()) pgm_path = pgm;
      cmd_pattern(cfg, out, pgm_path);
    } else if (*figure3 || *figure4) {
      fs::create_directories(out_dir);
      const auto panels = *figure3 ? cmd_figure3(cfg, out_dir, heatmaps) : cmd_figure4(cfg, out_dir, heatmaps);
      for (const auto& p : panels) std::cout << (fs::path(out_dir) / (p.name + ".csv")).string() << "\n";
    } else if (*simulate) {
      const HitSet h = cmd_simulate(cfg, out);
      std::cout << "wrote " << h.positions.size() << " hits to " << out << "\n";
    } else if (*infer) {
      std::cout << summarize(cmd_infer(hits_path, cfg, allow_mismatch, out)) << "\n";
    } else if (*disc) {
      std::cout << summarize(cmd_discriminate(hits_path, cfg, allow_mismatch, out)) << "\n";
    } else if (*trace) {
      const auto t = cmd_trace(hits_path, cfg, allow_mismatch, parse_schedule(schedule), out);
      std::cout << "wrote " << t.checkpoints.size() << " checkpoints to " << out << "\n";
    } else if (*sweep) {
      fs::create_directories(out_dir);
      for (const auto& p : cmd_sweep(cfg, thetas, phis, out_dir)) std::cout << p.string() << "\n";
    } else if (*show) {
      std::cout << config_to_json(cfg).dump(2) << "\n";
    }
  } catch (const IoError& e) {
    std::cerr << "abflux: " << e.what() << "\n";
    return kIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "abflux: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    // Domain, parse, provenance and degenerate-distribution errors.
    std::cerr << "abflux: " << e.what() << "\n";
    return kDomain;
  }
  return kOk;
}
