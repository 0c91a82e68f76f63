#include "abflux/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "abflux/errors.hpp"
#include "abflux/parallel.hpp"

namespace abflux {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInvGolden = 0.6180339887498949;  // (sqrt(5) - 1) / 2
constexpr int kMaxSweeps = 200;

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  v.back() = hi;
  return v;
}

struct Maximum {
  double x;
  double value;
};

// Golden-section search for a maximum on [a, b]; the endpoints are compared
// too so that boundary maxima are returned exactly.
template <class F>
Maximum golden_max(F&& f, double a, double b, double tol) {
  Maximum best{a, f(a)};
  if (const double fb = f(b); fb > best.value) best = {b, fb};
  double x1 = b - kInvGolden * (b - a);
  double x2 = a + kInvGolden * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tol) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvGolden * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvGolden * (b - a);
      f2 = f(x2);
    }
  }
  if (f1 > best.value) best = {x1, f1};
  if (f2 > best.value) best = {x2, f2};
  return best;
}

void check_options(const FitOptions& opts) {
  if (opts.theta_points < 2 || opts.phi_points < 2)
    throw DomainError("fit: theta_points and phi_points must be >= 2");
  if (!(opts.refine_step > 0.0)) throw DomainError("fit: refine_step must be > 0");
}

std::size_t effective_prefix(const HitLikelihood& model, std::size_t prefix) {
  const std::size_t n = std::min(prefix, model.size());
  if (n == 0) throw DomainError("inference needs at least one hit");
  return n;
}

}  // namespace

HitLikelihood::HitLikelihood(std::span<const double> positions, const ApertureGeometry& g,
                             const Window& window, std::size_t grid_points, unsigned workers) {
  g.validate();
  window.validate();
  if (grid_points < 2) throw DomainError("likelihood: grid_points must be >= 2");
  for (std::size_t i = 0; i < positions.size(); ++i)
    if (!window.contains(positions[i]))
      throw DomainError("likelihood: hit " + std::to_string(i) + " lies outside the window");

  hit_terms_.resize(positions.size());
  parallel_for(positions.size(), workers,
               [&](std::size_t i) { hit_terms_[i] = pattern_terms(g, positions[i]); });

  const ScreenGrid grid = ScreenGrid::uniform(window.x_min, window.x_max, grid_points);
  std::vector<PatternTerms> nodes(grid.xs.size());
  parallel_for(grid.xs.size(), workers,
               [&](std::size_t i) { nodes[i] = pattern_terms(g, grid.xs[i]); });
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const double w = 0.5 * (grid.xs[i] - grid.xs[i - 1]);
    window_integral_.direct += w * (nodes[i].direct + nodes[i - 1].direct);
    window_integral_.re_cross += w * (nodes[i].re_cross + nodes[i - 1].re_cross);
    window_integral_.im_cross += w * (nodes[i].im_cross + nodes[i - 1].im_cross);
  }
}

HitLikelihood HitLikelihood::from_terms(std::vector<PatternTerms> hit_terms,
                                        PatternTerms window_integral) {
  HitLikelihood model;
  model.hit_terms_ = std::move(hit_terms);
  model.window_integral_ = window_integral;
  return model;
}

LikelihoodValue HitLikelihood::evaluate(double theta, double phi, std::size_t prefix) const {
  const std::size_t n = std::min(prefix, hit_terms_.size());
  LikelihoodValue out;
  if (n == 0) return out;
  const double cos_phi = std::cos(phi);
  const double sin_cos = std::sin(phi) * std::cos(theta);
  const double norm = combine_terms(window_integral_, cos_phi, sin_cos);
  if (!(norm > 0.0)) {
    out.impossible_hits = n;
    out.nats = -std::numeric_limits<double>::infinity();
    return out;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = combine_terms(hit_terms_[i], cos_phi, sin_cos);
    if (d > 0.0)
      sum += std::log(d);
    else
      ++out.impossible_hits;
  }
  out.nats = out.impossible_hits > 0 ? -std::numeric_limits<double>::infinity()
                                     : sum - static_cast<double>(n) * std::log(norm);
  return out;
}

LikelihoodValue log_likelihood(std::span<const double> positions, const ApertureGeometry& g,
                               double theta, double phi, const Window& window,
                               std::size_t grid_points) {
  return HitLikelihood(positions, g, window, grid_points).evaluate(theta, phi);
}

LikelihoodValue log_likelihood(const HitSet& hits, const ApertureGeometry& g, double theta,
                               double phi, const Window& window) {
  return log_likelihood(hits.positions, g, theta, phi, window, hits.config.grid_points);
}

void canonicalize(double& theta, double& phi) {
  if (phi > kPi) {
    theta = kPi - theta;
    phi = 2.0 * kPi - phi;
  }
  theta = std::clamp(theta, 0.0, kPi);
}

LikelihoodSurface fit_mle(const HitLikelihood& model, std::size_t prefix, const FitOptions& opts) {
  check_options(opts);
  const std::size_t n = effective_prefix(model, prefix);
  auto f = [&](double theta, double phi) { return model.evaluate(theta, phi, n).nats; };

  LikelihoodSurface s;
  s.n_hits = n;
  s.theta_grid = linspace(0.0, kPi, opts.theta_points);
  s.phi_grid = linspace(0.0, kPi, opts.phi_points);
  s.loglik.resize(opts.theta_points * opts.phi_points);
  parallel_for(s.loglik.size(), opts.workers, [&](std::size_t k) {
    s.loglik[k] = f(s.theta_grid[k / opts.phi_points], s.phi_grid[k % opts.phi_points]);
  });

  const auto best = std::max_element(s.loglik.begin(), s.loglik.end());
  const auto k = static_cast<std::size_t>(best - s.loglik.begin());
  double theta = s.theta_grid[k / opts.phi_points];
  double phi = s.phi_grid[k % opts.phi_points];
  double value = *best;

  // Alternating golden-section refinement inside one coarse cell of the
  // current point.
  const double h_theta = kPi / static_cast<double>(opts.theta_points - 1);
  const double h_phi = kPi / static_cast<double>(opts.phi_points - 1);
  const double tol = opts.refine_step / 10.0;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    const double theta_before = theta;
    const double phi_before = phi;
    const Maximum mt = golden_max([&](double t) { return f(t, phi); },
                                  std::max(0.0, theta - h_theta), std::min(kPi, theta + h_theta),
                                  tol);
    if (mt.value > value) {
      theta = mt.x;
      value = mt.value;
    }
    const Maximum mp = golden_max([&](double p) { return f(theta, p); },
                                  std::max(0.0, phi - h_phi), std::min(2.0 * kPi, phi + h_phi),
                                  tol);
    if (mp.value > value) {
      phi = mp.x;
      value = mp.value;
    }
    if (std::max(std::abs(theta - theta_before), std::abs(phi - phi_before)) < opts.refine_step)
      break;
  }
  canonicalize(theta, phi);
  s.theta_hat = theta;
  s.phi_hat = phi;
  s.loglik_max = value;

  // Profile over theta: best scanned phi for each theta row.
  double lowest_row = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < opts.theta_points; ++i) {
    const auto row = s.loglik.begin() + static_cast<std::ptrdiff_t>(i * opts.phi_points);
    lowest_row = std::min(lowest_row, *std::max_element(row, row + static_cast<std::ptrdiff_t>(opts.phi_points)));
  }
  s.theta_profile_range = value - lowest_row;
  s.theta_unidentified = std::isfinite(s.theta_profile_range) &&
                         s.theta_profile_range < kFlatProfileNats;
  return s;
}

LikelihoodSurface fit_mle(std::span<const double> positions, const ApertureGeometry& g,
                          const Window& window, const FitOptions& opts) {
  if (positions.empty()) throw DomainError("fit_mle needs at least one hit");
  const HitLikelihood model(positions, g, window, opts.grid_points, opts.workers);
  return fit_mle(model, model.size(), opts);
}

HypothesisResult discriminate(const HitLikelihood& model, std::size_t prefix,
                              const FitOptions& opts) {
  check_options(opts);
  const std::size_t n = effective_prefix(model, prefix);

  // Definite flux: theta = 0 with phi over [0, 2 pi] covers both directions,
  // since (0, phi) and (pi, 2 pi - phi) give the same pattern.
  auto definite = [&](double phi) { return model.evaluate(0.0, phi, n).nats; };
  const std::vector<double> phis = linspace(0.0, 2.0 * kPi, 2 * opts.phi_points - 1);
  std::vector<double> values(phis.size());
  parallel_for(phis.size(), opts.workers, [&](std::size_t i) { values[i] = definite(phis[i]); });
  const auto it = std::max_element(values.begin(), values.end());
  Maximum def{phis[static_cast<std::size_t>(it - values.begin())], *it};
  const double h = kPi / static_cast<double>(opts.phi_points - 1);
  const Maximum refined = golden_max(definite, std::max(0.0, def.x - h),
                                     std::min(2.0 * kPi, def.x + h), opts.refine_step / 10.0);
  if (refined.value > def.value) def = refined;

  const LikelihoodSurface fit = fit_mle(model, n, opts);

  HypothesisResult r;
  r.n_hits = n;
  r.loglik_definite = def.value;
  r.definite_direction = def.x <= kPi ? FluxDirection::up : FluxDirection::down;
  r.definite_phi = def.x <= kPi ? def.x : 2.0 * kPi - def.x;
  r.loglik_superposition = fit.loglik_max;
  r.theta_hat = fit.theta_hat;
  r.phi_hat = fit.phi_hat;
  // The definite family is the theta in {0, pi} edge of the superposition
  // family, so its optimum is also a candidate for the superposition fit.
  if (r.loglik_superposition < r.loglik_definite) {
    r.loglik_superposition = r.loglik_definite;
    r.theta_hat = r.definite_direction == FluxDirection::up ? 0.0 : kPi;
    r.phi_hat = r.definite_phi;
  }
  if (std::isfinite(r.loglik_superposition) && std::isfinite(r.loglik_definite)) {
    r.llr = r.loglik_superposition - r.loglik_definite;
  } else {
    r.llr = std::isfinite(r.loglik_superposition) ? std::numeric_limits<double>::infinity() : 0.0;
  }
  if (!(r.loglik_superposition >= r.loglik_definite))
    throw std::logic_error("discriminate: nested likelihood ordering violated");
  return r;
}

HypothesisResult discriminate(std::span<const double> positions, const ApertureGeometry& g,
                              const Window& window, const FitOptions& opts) {
  if (positions.empty()) throw DomainError("discriminate needs at least one hit");
  const HitLikelihood model(positions, g, window, opts.grid_points, opts.workers);
  return discriminate(model, model.size(), opts);
}

SequentialTrace sequential_trace(std::span<const double> positions, const ApertureGeometry& g,
                                 const Window& window, std::span<const std::size_t> schedule,
                                 const FitOptions& opts) {
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i] == 0) throw DomainError("sequential_trace: checkpoints must be >= 1");
    if (i > 0 && schedule[i] <= schedule[i - 1])
      throw DomainError("sequential_trace: checkpoint schedule must be strictly increasing");
    if (schedule[i] > positions.size())
      throw DomainError("sequential_trace: checkpoint " + std::to_string(schedule[i]) +
                        " exceeds the " + std::to_string(positions.size()) + " available hits");
  }
  SequentialTrace trace;
  if (schedule.empty()) return trace;
  const HitLikelihood model(positions.first(schedule.back()), g, window, opts.grid_points,
                            opts.workers);
  for (const std::size_t n : schedule) {
    const HypothesisResult r = discriminate(model, n, opts);
    trace.checkpoints.push_back({n, r.theta_hat, r.phi_hat, r.llr});
  }
  return trace;
}

SlopeComparison compare_segment_slopes(const SequentialTrace& trace, std::size_t split_hits) {
  auto slope = [](const std::vector<std::pair<double, double>>& pts) {
    if (pts.size() < 2) throw DomainError("compare_segment_slopes: need two checkpoints per side");
    double mx = 0.0;
    double my = 0.0;
    for (const auto& [x, y] : pts) {
      mx += x;
      my += y;
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double sxy = 0.0;
    double sxx = 0.0;
    for (const auto& [x, y] : pts) {
      sxy += (x - mx) * (y - my);
      sxx += (x - mx) * (x - mx);
    }
    return sxy / sxx;
  };
  std::vector<std::pair<double, double>> before;
  std::vector<std::pair<double, double>> after;
  for (const auto& c : trace.checkpoints)
    (c.n_hits <= split_hits ? before : after).emplace_back(static_cast<double>(c.n_hits), c.llr);
  return {slope(before), slope(after)};
}

}  // namespace abflux
