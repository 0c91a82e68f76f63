#pragma once

#include <cstddef>
#include <vector>

#include "abflux/slit_model.hpp"

namespace abflux {

// Gaussian-unit constants used only by flux_parameter.
inline constexpr double kHbarGaussian = 1.054571817e-27;  // erg s
inline constexpr double kSpeedOfLightGaussian = 2.99792458e10;  // cm / s

// Flux superposition cos(theta/2)|up> + sin(theta/2) e^{i omega}|down>, each
// basis state carrying a flux of magnitude phi (dimensionless).
struct FluxState {
  double theta = 0.0;  // [0, pi]
  double omega = 0.0;  // [0, 2 pi)
  double phi = 0.0;    // >= 0

  void validate() const;
};

struct PhysicalFlux {
  double flux;    // gaussian units
  double charge;  // gaussian units
};

enum class FluxDirection { up, down };

// q Phi / (hbar c).
double flux_parameter(const PhysicalFlux& pf);

// Pieces of the screen density that do not depend on the flux state:
// direct = |psi+|^2 + |psi-|^2, re_cross = 2 Re(psi+* psi-),
// im_cross = 2 Im(psi+* psi-).
struct PatternTerms {
  double direct = 0.0;
  double re_cross = 0.0;
  double im_cross = 0.0;
};

PatternTerms pattern_terms(const ApertureGeometry& g, double x);

// The superposed-flux density written in terms of the flux-free pieces.
// cos(theta) selects the interpolation between the two basis patterns.
inline double combine_terms(const PatternTerms& t, double cos_phi, double sin_phi_cos_theta) {
  return t.direct + t.re_cross * cos_phi - t.im_cross * sin_phi_cos_theta;
}

// Screen density for a definite flux. The up pattern shifts toward negative x
// for growing phi.
double basis_density(const ApertureGeometry& g, double phi, FluxDirection direction, double x);

// Screen density for a superposed flux; independent of omega.
double density(const ApertureGeometry& g, const FluxState& fs, double x);

// Classical mixture: p_up * up pattern + (1 - p_up) * down pattern.
double mixture_density(const ApertureGeometry& g, double phi, double p_up, double x);

struct ScreenGrid {
  std::vector<double> xs;

  // n >= 1 evenly spaced points covering [x_min, x_max] including both ends.
  // Points of a window symmetric about zero are exact mirror images.
  static ScreenGrid uniform(double x_min, double x_max, std::size_t n);
};

struct DensityGrid {
  std::vector<double> xs;
  std::vector<double> values;
  ApertureGeometry geometry;
  FluxState flux;
};

DensityGrid density_grid(const ApertureGeometry& g, const FluxState& fs, const ScreenGrid& grid,
                         unsigned workers = 1);

// Trapezoid first moment over the grid window.
double center_of_mass(const DensityGrid& dg);

}  // namespace abflux
