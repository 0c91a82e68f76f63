#include "abflux/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "abflux/errors.hpp"
#include "abflux/parallel.hpp"

namespace abflux {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 output function.
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

void Window::validate() const {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max))
    throw DomainError("window: need finite x_min < x_max");
}

void SampleConfig::validate() const {
  window.validate();
  if (grid_points < 2) throw DomainError("sample config: grid_points must be >= 2");
}

double PdfCdf::cdf_at(double x) const {
  if (x <= xs.front()) return 0.0;
  if (x >= xs.back()) return 1.0;
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - xs.begin()) - 1;
  const double t = (x - xs[j]) / (xs[j + 1] - xs[j]);
  return cdf[j] + t * (cdf[j + 1] - cdf[j]);
}

double PdfCdf::quantile(double u) const {
  if (u <= 0.0) return xs.front();
  if (u >= 1.0) return xs.back();
  // First node with cdf > u; the cell before it has positive mass.
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) return xs.back();
  const std::size_t j = static_cast<std::size_t>(it - cdf.begin()) - 1;
  const double t = (u - cdf[j]) / (cdf[j + 1] - cdf[j]);
  const double x = xs[j] + t * (xs[j + 1] - xs[j]);
  return std::clamp(x, xs[j], xs[j + 1]);
}

PdfCdf pdf_cdf_from_density(std::vector<double> xs, const std::vector<double>& values) {
  const std::size_t n = xs.size();
  if (n < 2 || values.size() != n) throw DomainError("pdf/cdf: need >= 2 matching nodes");
  PdfCdf out;
  out.cdf.assign(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    const double a = std::max(0.0, values[i - 1]);
    const double b = std::max(0.0, values[i]);
    out.cdf[i] = out.cdf[i - 1] + 0.5 * (xs[i] - xs[i - 1]) * (a + b);
  }
  const double total = out.cdf.back();
  if (!(total > 0.0) || !std::isfinite(total))
    throw DegenerateDistributionError("density integrates to zero over the window");
  out.pdf.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.pdf[i] = std::max(0.0, values[i]) / total;
    out.cdf[i] /= total;
  }
  out.cdf.back() = 1.0;
  out.xs = std::move(xs);
  return out;
}

PdfCdf normalized_pdf_cdf(const ApertureGeometry& g, const FluxState& fs, const Window& window,
                          std::size_t grid_points, unsigned workers) {
  window.validate();
  if (grid_points < 2) throw DomainError("normalized_pdf_cdf: grid_points must be >= 2");
  DensityGrid dg =
      density_grid(g, fs, ScreenGrid::uniform(window.x_min, window.x_max, grid_points), workers);
  return pdf_cdf_from_density(std::move(dg.xs), dg.values);
}

double counter_uniform(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t key = mix64(seed + kGolden);
  const std::uint64_t bits = mix64(key + (index + 1) * kGolden);
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

HitSet sample_hits(const ApertureGeometry& g, const FluxState& fs, const SampleConfig& cfg,
                   unsigned workers) {
  cfg.validate();
  g.validate();
  fs.validate();
  HitSet hits{{}, cfg, fs, g};
  if (cfg.n_hits == 0) return hits;
  const PdfCdf dist = normalized_pdf_cdf(g, fs, cfg.window, cfg.grid_points, workers);
  hits.positions.resize(cfg.n_hits);
  parallel_for(cfg.n_hits, workers, [&](std::size_t i) {
    hits.positions[i] = dist.quantile(counter_uniform(cfg.seed, i));
  });
  return hits;
}

}  // namespace abflux
