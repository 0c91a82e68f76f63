#include "abflux/flux_pattern.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "abflux/errors.hpp"
#include "abflux/parallel.hpp"

namespace abflux {

void FluxState::validate() const {
  if (!(theta >= 0.0 && theta <= std::numbers::pi))
    throw DomainError("flux state: theta must lie in [0, pi], got " + std::to_string(theta));
  if (!(omega >= 0.0 && omega < 2.0 * std::numbers::pi))
    throw DomainError("flux state: omega must lie in [0, 2 pi), got " + std::to_string(omega));
  if (!(phi >= 0.0 && std::isfinite(phi)))
    throw DomainError("flux state: phi must be finite and >= 0, got " + std::to_string(phi));
}

double flux_parameter(const PhysicalFlux& pf) {
  if (!std::isfinite(pf.flux) || !std::isfinite(pf.charge))
    throw DomainError("flux_parameter: flux and charge must be finite");
  if (pf.charge == 0.0) throw DomainError("flux_parameter: charge must be nonzero");
  return pf.charge * pf.flux / (kHbarGaussian * kSpeedOfLightGaussian);
}

PatternTerms pattern_terms(const ApertureGeometry& g, double x) {
  const ComplexAmplitude plus = slit_amplitude(g, Slit::plus, x);
  const ComplexAmplitude minus = slit_amplitude(g, Slit::minus, x);
  const ComplexAmplitude cross = std::conj(plus) * minus;
  return {std::norm(plus) + std::norm(minus), 2.0 * cross.real(), 2.0 * cross.imag()};
}

double basis_density(const ApertureGeometry& g, double phi, FluxDirection direction, double x) {
  if (!(phi >= 0.0 && std::isfinite(phi)))
    throw DomainError("basis_density: phi must be finite and >= 0");
  const PatternTerms t = pattern_terms(g, x);
  const double s = direction == FluxDirection::up ? std::sin(phi) : -std::sin(phi);
  return combine_terms(t, std::cos(phi), s);
}

double density(const ApertureGeometry& g, const FluxState& fs, double x) {
  fs.validate();
  if (!std::isfinite(x)) throw DomainError("density: screen position must be finite");
  const PatternTerms t = pattern_terms(g, x);
  return combine_terms(t, std::cos(fs.phi), std::sin(fs.phi) * std::cos(fs.theta));
}

double mixture_density(const ApertureGeometry& g, double phi, double p_up, double x) {
  if (!(p_up >= 0.0 && p_up <= 1.0))
    throw DomainError("mixture_density: p_up must lie in [0, 1]");
  return p_up * basis_density(g, phi, FluxDirection::up, x) +
         (1.0 - p_up) * basis_density(g, phi, FluxDirection::down, x);
}

ScreenGrid ScreenGrid::uniform(double x_min, double x_max, std::size_t n) {
  if (n == 0) throw DomainError("screen grid: need at least one point");
  if (!std::isfinite(x_min) || !std::isfinite(x_max))
    throw DomainError("screen grid: window must be finite");
  if (n == 1) return {{x_min}};
  if (!(x_min < x_max)) throw DomainError("screen grid: x_min must be below x_max");
  ScreenGrid grid;
  grid.xs.resize(n);
  const double span = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = static_cast<double>(n - 1 - i) * x_min;
    const double hi = static_cast<double>(i) * x_max;
    grid.xs[i] = (lo + hi) / span;
  }
  return grid;
}

DensityGrid density_grid(const ApertureGeometry& g, const FluxState& fs, const ScreenGrid& grid,
                         unsigned workers) {
  if (grid.xs.empty()) throw DomainError("density_grid: empty screen grid");
  for (std::size_t i = 1; i < grid.xs.size(); ++i)
    if (!(grid.xs[i] > grid.xs[i - 1]))
      throw DomainError("density_grid: screen positions must be strictly increasing");
  g.validate();
  fs.validate();
  DensityGrid out{grid.xs, std::vector<double>(grid.xs.size()), g, fs};
  parallel_for(grid.xs.size(), workers,
               [&](std::size_t i) { out.values[i] = density(g, fs, grid.xs[i]); });
  return out;
}

double center_of_mass(const DensityGrid& dg) {
  if (dg.xs.size() != dg.values.size() || dg.xs.empty())
    throw DomainError("center_of_mass: malformed density grid");
  if (dg.xs.size() == 1) {
    if (dg.values[0] == 0.0) throw DomainError("center_of_mass: density is identically zero");
    return dg.xs[0];
  }
  double mass = 0.0;
  double moment = 0.0;
  for (std::size_t i = 1; i < dg.xs.size(); ++i) {
    const double w = 0.5 * (dg.xs[i] - dg.xs[i - 1]);
    mass += w * (dg.values[i] + dg.values[i - 1]);
    moment += w * (dg.xs[i] * dg.values[i] + dg.xs[i - 1] * dg.values[i - 1]);
  }
  if (mass == 0.0) throw DomainError("center_of_mass: density is identically zero");
  return moment / mass;
}

}  // namespace abflux
