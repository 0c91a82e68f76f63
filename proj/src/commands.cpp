#include "abflux/commands.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "abflux/csv_io.hpp"
#include "abflux/errors.hpp"
#include "abflux/parallel.hpp"

namespace abflux {
namespace {

constexpr double kPi = std::numbers::pi;

FitOptions fit_options(const RunConfig& cfg) {
  FitOptions o;
  o.theta_points = cfg.grids.theta_points;
  o.phi_points = cfg.grids.phi_points;
  o.grid_points = cfg.sample.grid_points;
  o.workers = cfg.workers;
  return o;
}

std::vector<double> param_grid(double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = hi * static_cast<double>(i) / static_cast<double>(n - 1);
  v.back() = hi;
  return v;
}

std::string header_block(const std::string& command, const RunConfig& cfg, ProvenanceLine extra) {
  std::string out = render_comment({{"tool", std::string(kToolVersion)}, {"command", command}});
  if (!extra.empty()) out += render_comment(extra);
  out += render_comment(geometry_provenance(cfg.geometry));
  return out;
}

ProvenanceLine fit_provenance(const std::string& input, const RunConfig& cfg) {
  return {{"input", input},
          {"window", format_window(cfg.sample.window)},
          {"grid_points", std::to_string(cfg.sample.grid_points)},
          {"theta_points", std::to_string(cfg.grids.theta_points)},
          {"phi_points", std::to_string(cfg.grids.phi_points)}};
}

// Panel rows are computed in parallel; each row is a serial density grid, so
// the values do not depend on the worker count.
Panel build_panel(const RunConfig& cfg, std::string name, std::string fixed_name, double fixed,
                  std::string param_name, std::vector<double> params) {
  const ScreenGrid grid =
      ScreenGrid::uniform(cfg.sample.window.x_min, cfg.sample.window.x_max, cfg.grids.screen_points);
  Panel p{std::move(name), std::move(fixed_name), fixed, std::move(param_name), grid.xs,
          std::move(params), {}};
  p.values.resize(p.xs.size() * p.params.size());
  const bool sweeps_phi = p.param_name == "phi";
  parallel_for(p.params.size(), cfg.workers, [&](std::size_t r) {
    const FluxState fs = sweeps_phi ? FluxState{fixed, cfg.flux.omega, p.params[r]}
                                    : FluxState{p.params[r], cfg.flux.omega, fixed};
    const DensityGrid dg = density_grid(cfg.geometry, fs, grid, 1);
    std::copy(dg.values.begin(), dg.values.end(), p.values.begin() + r * p.xs.size());
  });
  return p;
}

void write_panels(const RunConfig& cfg, const std::vector<Panel>& panels,
                  const std::filesystem::path& out_dir, bool write_pgm) {
  for (const Panel& p : panels) {
    write_text_file(out_dir / (p.name + ".csv"), render_panel_csv(cfg, p));
    if (write_pgm)
      write_text_file(out_dir / (p.name + ".pgm"), render_pgm(p.xs.size(), p.params.size(), p.values));
  }
}

bool same(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

}  // namespace

std::vector<double> Panel::slice(std::size_t param_index) const {
  const auto first = values.begin() + static_cast<std::ptrdiff_t>(param_index * xs.size());
  return {first, first + static_cast<std::ptrdiff_t>(xs.size())};
}

std::vector<Panel> figure3_panels(const RunConfig& cfg) {
  cfg.validate();
  const auto phis = param_grid(2.0 * kPi, cfg.grids.param_points);
  return {build_panel(cfg, "figure3_theta_0", "theta", 0.0, "phi", phis),
          build_panel(cfg, "figure3_theta_pi", "theta", kPi, "phi", phis),
          build_panel(cfg, "figure3_theta_pi_over_2", "theta", kPi / 2, "phi", phis)};
}

std::vector<Panel> figure4_panels(const RunConfig& cfg) {
  cfg.validate();
  const auto thetas = param_grid(kPi, cfg.grids.param_points);
  return {build_panel(cfg, "figure4_phi_pi_over_4", "phi", kPi / 4, "theta", thetas),
          build_panel(cfg, "figure4_phi_pi_over_2", "phi", kPi / 2, "theta", thetas),
          build_panel(cfg, "figure4_phi_pi", "phi", kPi, "theta", thetas)};
}

std::string render_pattern_csv(const RunConfig& cfg, const DensityGrid& dg) {
  std::string out = header_block("pattern", cfg,
                                 {{"theta", format_number(dg.flux.theta)},
                                  {"omega", format_number(dg.flux.omega)},
                                  {"phi", format_number(dg.flux.phi)},
                                  {"window", format_window(cfg.sample.window)},
                                  {"screen_points", std::to_string(dg.xs.size())}});
  out += "x_m,density\n";
  for (std::size_t i = 0; i < dg.xs.size(); ++i)
    out += format_number(dg.xs[i]) + "," + format_number(dg.values[i]) + "\n";
  return out;
}

std::string render_panel_csv(const RunConfig& cfg, const Panel& p) {
  std::string out = header_block(p.name.substr(0, p.name.find('_')), cfg,
                                 {{p.fixed_name, format_number(p.fixed_value)},
                                  {"omega", format_number(cfg.flux.omega)},
                                  {"window", format_window(cfg.sample.window)},
                                  {"screen_points", std::to_string(p.xs.size())},
                                  {"param_points", std::to_string(p.params.size())}});
  out += "x_m," + p.param_name + ",density\n";
  for (std::size_t r = 0; r < p.params.size(); ++r) {
    const std::string param = format_number(p.params[r]);
    for (std::size_t i = 0; i < p.xs.size(); ++i)
      out += format_number(p.xs[i]) + "," + param + "," + format_number(p.values[r * p.xs.size() + i]) + "\n";
  }
  return out;
}

std::string render_surface_csv(const LikelihoodSurface& s, const std::string& input,
                               const RunConfig& cfg) {
  std::string out = header_block("infer", cfg, fit_provenance(input, cfg));
  out += render_comment({{"n_hits", std::to_string(s.n_hits)},
                         {"theta_hat", format_number(s.theta_hat)},
                         {"phi_hat", format_number(s.phi_hat)},
                         {"loglik_max", format_number(s.loglik_max)},
                         {"theta_profile_range", format_number(s.theta_profile_range)},
                         {"theta_unidentified", s.theta_unidentified ? "true" : "false"}});
  out += "theta,phi,loglik\n";
  for (std::size_t i = 0; i < s.theta_grid.size(); ++i)
    for (std::size_t j = 0; j < s.phi_grid.size(); ++j)
      out += format_number(s.theta_grid[i]) + "," + format_number(s.phi_grid[j]) + "," +
             format_number(s.at(i, j)) + "\n";
  return out;
}

std::string render_hypothesis_csv(const HypothesisResult& r, const std::string& input,
                                  const RunConfig& cfg) {
  std::string out = header_block("discriminate", cfg, fit_provenance(input, cfg));
  out += "n_hits,loglik_superposition,loglik_definite,llr,theta_hat,phi_hat,definite_direction,definite_phi\n";
  out += std::to_string(r.n_hits) + "," + format_number(r.loglik_superposition) + "," +
         format_number(r.loglik_definite) + "," + format_number(r.llr) + "," +
         format_number(r.theta_hat) + "," + format_number(r.phi_hat) + "," +
         (r.definite_direction == FluxDirection::up ? "up" : "down") + "," +
         format_number(r.definite_phi) + "\n";
  return out;
}

std::string render_trace_csv(const SequentialTrace& t, const std::string& input,
                             const RunConfig& cfg) {
  std::string out = header_block("trace", cfg, fit_provenance(input, cfg));
  out += "n_hits,theta_hat,phi_hat,llr\n";
  for (const auto& c : t.checkpoints)
    out += std::to_string(c.n_hits) + "," + format_number(c.theta_hat) + "," +
           format_number(c.phi_hat) + "," + format_number(c.llr) + "\n";
  return out;
}

DensityGrid cmd_pattern(const RunConfig& cfg, const std::filesystem::path& csv,
                        const std::optional<std::filesystem::path>& pgm) {
  cfg.validate();
  const ScreenGrid grid =
      ScreenGrid::uniform(cfg.sample.window.x_min, cfg.sample.window.x_max, cfg.grids.screen_points);
  DensityGrid dg = density_grid(cfg.geometry, cfg.flux, grid, cfg.workers);
  write_text_file(csv, render_pattern_csv(cfg, dg));
  if (pgm) write_text_file(*pgm, render_pgm(dg.xs.size(), 1, dg.values));
  return dg;
}

std::vector<Panel> cmd_figure3(const RunConfig& cfg, const std::filesystem::path& out_dir,
                               bool write_pgm) {
  auto panels = figure3_panels(cfg);
  write_panels(cfg, panels, out_dir, write_pgm);
  return panels;
}

std::vector<Panel> cmd_figure4(const RunConfig& cfg, const std::filesystem::path& out_dir,
                               bool write_pgm) {
  auto panels = figure4_panels(cfg);
  write_panels(cfg, panels, out_dir, write_pgm);
  return panels;
}

HitSet cmd_simulate(const RunConfig& cfg, const std::filesystem::path& csv) {
  cfg.validate();
  HitSet hits = sample_hits(cfg.geometry, cfg.flux, cfg.sample, cfg.workers);
  write_text_file(csv, render_hits_csv(hits));
  return hits;
}

HitFile load_checked_hits(const std::filesystem::path& hits, const RunConfig& cfg,
                          bool allow_mismatch) {
  cfg.validate();
  HitFile file = read_hits_csv(hits);
  if (allow_mismatch) return file;
  const std::string where = hits.string();
  if (!file.geometry)
    throw ProvenanceMismatch(where + ": no geometry provenance; pass the override flag to use it anyway");
  const ApertureGeometry& g = *file.geometry;
  const ApertureGeometry& c = cfg.geometry;
  if (!same(g.source_to_slit, c.source_to_slit) || !same(g.slit_to_screen, c.slit_to_screen) ||
      !same(g.slit_half_width, c.slit_half_width) || !same(g.slit_separation, c.slit_separation) ||
      !same(g.wavelength, c.wavelength))
    throw ProvenanceMismatch(where + ": hit file geometry (" + render_comment(geometry_provenance(g)).substr(2) +
                             ") differs from the configured geometry");
  if (!file.window || !same(file.window->x_min, cfg.sample.window.x_min) ||
      !same(file.window->x_max, cfg.sample.window.x_max))
    throw ProvenanceMismatch(where + ": hit file window differs from the configured window " +
                             format_window(cfg.sample.window));
  if (file.grid_points && *file.grid_points != cfg.sample.grid_points)
    throw ProvenanceMismatch(where + ": hit file was sampled on " + std::to_string(*file.grid_points) +
                             " grid points, configuration uses " + std::to_string(cfg.sample.grid_points));
  return file;
}

LikelihoodSurface cmd_infer(const std::filesystem::path& hits, const RunConfig& cfg,
                            bool allow_mismatch, const std::filesystem::path& csv) {
  const HitFile file = load_checked_hits(hits, cfg, allow_mismatch);
  const LikelihoodSurface s = fit_mle(file.positions, cfg.geometry, cfg.sample.window, fit_options(cfg));
  write_text_file(csv, render_surface_csv(s, hits.filename().string(), cfg));
  return s;
}

HypothesisResult cmd_discriminate(const std::filesystem::path& hits, const RunConfig& cfg,
                                  bool allow_mismatch, const std::filesystem::path& csv) {
  const HitFile file = load_checked_hits(hits, cfg, allow_mismatch);
  const HypothesisResult r = discriminate(file.positions, cfg.geometry, cfg.sample.window, fit_options(cfg));
  write_text_file(csv, render_hypothesis_csv(r, hits.filename().string(), cfg));
  return r;
}

SequentialTrace cmd_trace(const std::filesystem::path& hits, const RunConfig& cfg,
                          bool allow_mismatch, const std::vector<std::size_t>& schedule,
                          const std::filesystem::path& csv) {
  const HitFile file = load_checked_hits(hits, cfg, allow_mismatch);
  const SequentialTrace t =
      sequential_trace(file.positions, cfg.geometry, cfg.sample.window, schedule, fit_options(cfg));
  write_text_file(csv, render_trace_csv(t, hits.filename().string(), cfg));
  return t;
}

std::vector<std::filesystem::path> cmd_sweep(const RunConfig& cfg,
                                             const std::vector<double>& thetas,
                                             const std::vector<double>& phis,
                                             const std::filesystem::path& out_dir) {
  cfg.validate();
  if (thetas.empty() || phis.empty()) throw DomainError("sweep: need at least one theta and one phi");
  for (const double t : thetas) FluxState{t, cfg.flux.omega, 0.0}.validate();
  for (const double p : phis) FluxState{0.0, cfg.flux.omega, p}.validate();
  const ScreenGrid grid =
      ScreenGrid::uniform(cfg.sample.window.x_min, cfg.sample.window.x_max, cfg.grids.screen_points);
  std::vector<std::filesystem::path> paths(thetas.size() * phis.size());
  std::vector<std::string> contents(paths.size());
  parallel_for(paths.size(), cfg.workers, [&](std::size_t k) {
    const std::size_t i = k / phis.size();
    const std::size_t j = k % phis.size();
    RunConfig point = cfg;
    point.flux.theta = thetas[i];
    point.flux.phi = phis[j];
    contents[k] = render_pattern_csv(point, density_grid(cfg.geometry, point.flux, grid, 1));
    paths[k] = out_dir / ("sweep_" + std::to_string(i) + "_" + std::to_string(j) + ".csv");
  });
  for (std::size_t k = 0; k < paths.size(); ++k) write_text_file(paths[k], contents[k]);
  return paths;
}

std::string summarize(const LikelihoodSurface& s) {
  std::ostringstream out;
  out << "n_hits=" << s.n_hits << " theta_hat=" << format_number(s.theta_hat)
      << " phi_hat=" << format_number(s.phi_hat) << " loglik_max=" << format_number(s.loglik_max);
  if (s.theta_unidentified)
    out << " theta_unidentified (profile spans " << format_number(s.theta_profile_range) << " nats)";
  return out.str();
}

std::string summarize(const HypothesisResult& r) {
  std::ostringstream out;
  out << "n_hits=" << r.n_hits << " llr=" << format_number(r.llr)
      << " superposition(theta=" << format_number(r.theta_hat) << ", phi=" << format_number(r.phi_hat)
      << ") definite(" << (r.definite_direction == FluxDirection::up ? "up" : "down")
      << ", phi=" << format_number(r.definite_phi) << ")";
  return out.str();
}

}  // namespace abflux
