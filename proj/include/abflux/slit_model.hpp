#pragma once

#include "abflux/fresnel.hpp"

namespace abflux {

// SI constants.
inline constexpr double kPlanck = 6.62607015e-34;          // J s
inline constexpr double kElectronMass = 9.1093837015e-31;  // kg

// Two-slit aperture, all lengths in meters. Slits are centred at +/- x0 with
// half-width b; the point source sits a distance l before the slit plane and
// the screen a distance L behind it.
struct ApertureGeometry {
  double source_to_slit = 10.0;
  double slit_to_screen = 1.0;
  double slit_half_width = 0.25e-6;
  double slit_separation = 1e-6;
  double wavelength = 5e-12;

  // Throws DomainError unless every length is positive and finite and x0 > b.
  void validate() const;

  friend bool operator==(const ApertureGeometry&, const ApertureGeometry&) = default;
};

// Reference setup used for every figure: l = 10 m, L = 1 m,
// lambda = 5e-12 m, b = 0.25 um, x0 = 1 um.
inline constexpr ApertureGeometry kJonssonGeometry{};

struct GeometryConstants {
  double amplitude_scale;  // N, m^-1/2
  double beta;             // m^-1
  double normalization;    // dimensionless
};

enum class Slit { plus, minus };

// Default screen window in meters.
inline constexpr double kDefaultWindowMin = -2e-5;
inline constexpr double kDefaultWindowMax = 2e-5;

double de_broglie_wavelength(double mass_kg, double speed_m_per_s);

GeometryConstants geometry_constants(const ApertureGeometry& g);

// Screen amplitude of an electron passing the plus (x0 side) or minus slit.
ComplexAmplitude slit_amplitude(const ApertureGeometry& g, Slit slit, double x);

// Same amplitude without the common factor exp(i pi x^2 / (lambda (L + l))).
// That factor cancels in every density; kept separate so the cancellation can
// be checked.
ComplexAmplitude slit_amplitude_without_phase(const ApertureGeometry& g, Slit slit, double x);

}  // namespace abflux
