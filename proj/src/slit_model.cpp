#include "abflux/slit_model.hpp"

#include <cmath>
#include <numbers>

#include "abflux/errors.hpp"

namespace abflux {
namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void ApertureGeometry::validate() const {
  if (!positive_finite(source_to_slit)) throw DomainError("geometry: source_to_slit must be > 0");
  if (!positive_finite(slit_to_screen)) throw DomainError("geometry: slit_to_screen must be > 0");
  if (!positive_finite(slit_half_width)) throw DomainError("geometry: slit_half_width must be > 0");
  if (!positive_finite(slit_separation)) throw DomainError("geometry: slit_separation must be > 0");
  if (!positive_finite(wavelength)) throw DomainError("geometry: wavelength must be > 0");
  if (!(slit_separation > slit_half_width))
    throw DomainError("geometry: slit_separation must exceed slit_half_width");
}

double de_broglie_wavelength(double mass_kg, double speed_m_per_s) {
  if (!positive_finite(mass_kg)) throw DomainError("de_broglie_wavelength: mass must be > 0");
  if (!positive_finite(speed_m_per_s))
    throw DomainError("de_broglie_wavelength: speed must be > 0");
  return kPlanck / (mass_kg * speed_m_per_s);
}

GeometryConstants geometry_constants(const ApertureGeometry& g) {
  g.validate();
  const double l = g.source_to_slit;
  const double L = g.slit_to_screen;
  const double lambda = g.wavelength;
  return {
      std::sqrt(1.0 / (2.0 * lambda * (l + L))),
      std::sqrt((2.0 / lambda) * (1.0 / l + 1.0 / L)),
      4.0 * g.slit_half_width / (lambda * l),
  };
}

ComplexAmplitude slit_amplitude_without_phase(const ApertureGeometry& g, Slit slit, double x) {
  if (!std::isfinite(x)) throw DomainError("slit_amplitude: screen position must be finite");
  const GeometryConstants k = geometry_constants(g);
  const double projection = g.source_to_slit / (g.slit_to_screen + g.source_to_slit);
  const double shift = slit == Slit::plus ? projection * x : -(projection * x);
  const double outer = k.beta * (g.slit_separation + g.slit_half_width - shift);
  const double inner = k.beta * (g.slit_separation - g.slit_half_width - shift);
  const ComplexAmplitude prefactor(0.0, -k.amplitude_scale / std::sqrt(k.normalization));
  return prefactor * (fresnel_ei(outer) - fresnel_ei(inner));
}

ComplexAmplitude slit_amplitude(const ApertureGeometry& g, Slit slit, double x) {
  const ComplexAmplitude bare = slit_amplitude_without_phase(g, slit, x);
  const double phase =
      std::numbers::pi * x * x / (g.wavelength * (g.slit_to_screen + g.source_to_slit));
  return std::polar(1.0, phase) * bare;
}

}  // namespace abflux
