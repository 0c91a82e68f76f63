#pragma once

#include <complex>
#include <span>
#include <vector>

namespace abflux {

using ComplexAmplitude = std::complex<double>;

// Complex Fresnel integral Ei(z) = C(z) + i S(z) = int_0^z exp(i pi t^2 / 2) dt
// for real z. Absolute error per component is below 1e-12 on the real line.
// Throws DomainError for non-finite z.
ComplexAmplitude fresnel_ei(double z);

// Elementwise fresnel_ei; the DomainError message names the offending index.
std::vector<ComplexAmplitude> fresnel_ei_grid(std::span<const double> zs);

namespace detail {

// |z| at and below which the power series is used.
inline constexpr double kFresnelSeriesLimit = 2.5;

// Both branches take |z| and return Ei(|z|); exposed so tests can compare them
// across the switch point.
ComplexAmplitude fresnel_power_series(double z);
ComplexAmplitude fresnel_continued_fraction(double z);

}  // namespace detail
}  // namespace abflux
