#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "abflux/montecarlo.hpp"

namespace abflux {

// Log-likelihood in nats. A hit where the normalized density vanishes makes
// the value -infinity; such hits are counted instead of being dropped.
struct LikelihoodValue {
  double nats = 0.0;
  std::size_t impossible_hits = 0;

  bool finite() const { return impossible_hits == 0; }
};

// Unbinned likelihood of flux-state parameters for a fixed hit sample. The
// flux-free pattern terms are computed once per hit; the window normalization
// uses the same trapezoid grid as the sampler.
class HitLikelihood {
 public:
  HitLikelihood(std::span<const double> positions, const ApertureGeometry& g, const Window& window,
                std::size_t grid_points = kDefaultSamplerGridPoints, unsigned workers = 1);

  // Uses the first `prefix` hits (all hits when prefix exceeds the sample).
  LikelihoodValue evaluate(double theta, double phi, std::size_t prefix) const;
  LikelihoodValue evaluate(double theta, double phi) const { return evaluate(theta, phi, size()); }

  std::size_t size() const { return hit_terms_.size(); }

  // Builds a model directly from per-hit pattern terms and the window
  // integral of the terms.
  static HitLikelihood from_terms(std::vector<PatternTerms> hit_terms, PatternTerms window_integral);

 private:
  HitLikelihood() = default;

  std::vector<PatternTerms> hit_terms_;
  PatternTerms window_integral_;
};

LikelihoodValue log_likelihood(std::span<const double> positions, const ApertureGeometry& g,
                               double theta, double phi, const Window& window,
                               std::size_t grid_points = kDefaultSamplerGridPoints);
LikelihoodValue log_likelihood(const HitSet& hits, const ApertureGeometry& g, double theta,
                               double phi, const Window& window);

struct FitOptions {
  std::size_t theta_points = 181;
  std::size_t phi_points = 181;
  double refine_step = 1e-4;  // rad
  std::size_t grid_points = kDefaultSamplerGridPoints;
  unsigned workers = 1;
};

// Half the 95% chi-square(1) quantile: when the profile log-likelihood over
// theta (maximized over phi) spans less than this many nats, theta is reported
// as unidentified.
inline constexpr double kFlatProfileNats = 1.920729410347062;

struct LikelihoodSurface {
  std::vector<double> theta_grid;
  std::vector<double> phi_grid;
  std::vector<double> loglik;  // row-major, theta index major
  double theta_hat = 0.0;      // canonical: phi_hat in [0, pi]
  double phi_hat = 0.0;
  double loglik_max = 0.0;
  double theta_profile_range = 0.0;  // loglik_max minus the lowest theta-row maximum
  bool theta_unidentified = false;
  std::size_t n_hits = 0;

  double at(std::size_t theta_index, std::size_t phi_index) const {
    return loglik[theta_index * phi_grid.size() + phi_index];
  }
};

// Maps (theta, phi) with phi in (pi, 2 pi] onto the equivalent point with
// phi in [0, pi].
void canonicalize(double& theta, double& phi);

LikelihoodSurface fit_mle(const HitLikelihood& model, std::size_t prefix, const FitOptions& opts);
LikelihoodSurface fit_mle(std::span<const double> positions, const ApertureGeometry& g,
                          const Window& window, const FitOptions& opts = {});

struct HypothesisResult {
  double loglik_superposition = 0.0;
  double loglik_definite = 0.0;
  double llr = 0.0;
  std::size_t n_hits = 0;
  double theta_hat = 0.0;
  double phi_hat = 0.0;
  FluxDirection definite_direction = FluxDirection::up;
  double definite_phi = 0.0;
};

HypothesisResult discriminate(const HitLikelihood& model, std::size_t prefix,
                              const FitOptions& opts);
HypothesisResult discriminate(std::span<const double> positions, const ApertureGeometry& g,
                              const Window& window, const FitOptions& opts = {});

struct TraceCheckpoint {
  std::size_t n_hits = 0;
  double theta_hat = 0.0;
  double phi_hat = 0.0;
  double llr = 0.0;
};

struct SequentialTrace {
  std::vector<TraceCheckpoint> checkpoints;
};

SequentialTrace sequential_trace(std::span<const double> positions, const ApertureGeometry& g,
                                 const Window& window, std::span<const std::size_t> schedule,
                                 const FitOptions& opts = {});

// Least-squares slopes of llr against hit count on either side of a split.
struct SlopeComparison {
  double slope_before = 0.0;
  double slope_after = 0.0;
};

SlopeComparison compare_segment_slopes(const SequentialTrace& trace, std::size_t split_hits);

}  // namespace abflux
