#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "abflux/flux_pattern.hpp"

namespace abflux {

struct Window {
  double x_min = kDefaultWindowMin;
  double x_max = kDefaultWindowMax;

  void validate() const;
  double width() const { return x_max - x_min; }
  bool contains(double x) const { return x >= x_min && x <= x_max; }

  friend bool operator==(const Window&, const Window&) = default;
};

inline constexpr std::size_t kDefaultSamplerGridPoints = 8192;

struct SampleConfig {
  Window window;
  std::size_t grid_points = kDefaultSamplerGridPoints;
  std::size_t n_hits = 0;
  std::uint64_t seed = 0;

  void validate() const;
};

// Simulated arrival positions in generation order.
struct HitSet {
  std::vector<double> positions;
  SampleConfig config;
  FluxState flux;
  ApertureGeometry geometry;
};

// Window-normalized density on a uniform grid. The cdf is the running
// trapezoid integral of the pdf and is interpolated linearly between nodes.
struct PdfCdf {
  std::vector<double> xs;
  std::vector<double> pdf;
  std::vector<double> cdf;

  double cdf_at(double x) const;
  // Inverse of the piecewise-linear cdf for u in [0, 1].
  double quantile(double u) const;
};

// Builds the normalized pdf/cdf from density samples on increasing nodes.
// Negative round-off values are treated as zero.
PdfCdf pdf_cdf_from_density(std::vector<double> xs, const std::vector<double>& values);

PdfCdf normalized_pdf_cdf(const ApertureGeometry& g, const FluxState& fs, const Window& window,
                          std::size_t grid_points, unsigned workers = 1);

// Uniform variate in [0, 1) derived only from (seed, index).
double counter_uniform(std::uint64_t seed, std::uint64_t index);

HitSet sample_hits(const ApertureGeometry& g, const FluxState& fs, const SampleConfig& cfg,
                   unsigned workers = 1);

}  // namespace abflux
