#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "abflux/config.hpp"
#include "abflux/csv_io.hpp"
#include "abflux/inference.hpp"

namespace abflux {

// Density over (x, parameter) for one figure panel; values are row-major with
// one row per parameter value.
struct Panel {
  std::string name;        // file stem, e.g. "figure3_theta_0"
  std::string fixed_name;  // "theta" or "phi"
  double fixed_value = 0.0;
  std::string param_name;  // the swept parameter
  std::vector<double> xs;
  std::vector<double> params;
  std::vector<double> values;

  std::vector<double> slice(std::size_t param_index) const;
};

// theta in {0, pi, pi/2}; phi sampled on [0, 2 pi].
std::vector<Panel> figure3_panels(const RunConfig& cfg);
// phi in {pi/4, pi/2, pi}; theta sampled on [0, pi].
std::vector<Panel> figure4_panels(const RunConfig& cfg);

std::string render_pattern_csv(const RunConfig& cfg, const DensityGrid& dg);
std::string render_panel_csv(const RunConfig& cfg, const Panel& panel);
std::string render_surface_csv(const LikelihoodSurface& s, const std::string& input,
                               const RunConfig& cfg);
std::string render_hypothesis_csv(const HypothesisResult& r, const std::string& input,
                                  const RunConfig& cfg);
std::string render_trace_csv(const SequentialTrace& t, const std::string& input,
                             const RunConfig& cfg);

DensityGrid cmd_pattern(const RunConfig& cfg, const std::filesystem::path& csv,
                        const std::optional<std::filesystem::path>& pgm = std::nullopt);
std::vector<Panel> cmd_figure3(const RunConfig& cfg, const std::filesystem::path& out_dir,
                               bool write_pgm);
std::vector<Panel> cmd_figure4(const RunConfig& cfg, const std::filesystem::path& out_dir,
                               bool write_pgm);
HitSet cmd_simulate(const RunConfig& cfg, const std::filesystem::path& csv);

// Loads a hit file and checks its provenance (geometry, window, normalization
// grid) against cfg. Throws ProvenanceMismatch unless allow_mismatch is set.
HitFile load_checked_hits(const std::filesystem::path& hits, const RunConfig& cfg,
                          bool allow_mismatch);

LikelihoodSurface cmd_infer(const std::filesystem::path& hits, const RunConfig& cfg,
                            bool allow_mismatch, const std::filesystem::path& csv);
HypothesisResult cmd_discriminate(const std::filesystem::path& hits, const RunConfig& cfg,
                                  bool allow_mismatch, const std::filesystem::path& csv);
SequentialTrace cmd_trace(const std::filesystem::path& hits, const RunConfig& cfg,
                          bool allow_mismatch, const std::vector<std::size_t>& schedule,
                          const std::filesystem::path& csv);

// One pattern file per (theta, phi) pair, named sweep_<i>_<j>.csv; each file
// is byte-identical to cmd_pattern output for that point. Points run in
// parallel.
std::vector<std::filesystem::path> cmd_sweep(const RunConfig& cfg,
                                             const std::vector<double>& thetas,
                                             const std::vector<double>& phis,
                                             const std::filesystem::path& out_dir);

std::string summarize(const LikelihoodSurface& s);
std::string summarize(const HypothesisResult& r);

}  // namespace abflux
