#pragma once

// Test-only reference integrator: adaptive Gauss-Kronrod (7/15) in extended
// precision. Shares no code with the library's Fresnel evaluation.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

namespace abflux::testing {

using LongComplex = std::complex<long double>;

namespace detail {

constexpr std::array<long double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329L, 0.949107912342758524526189684047851L,
    0.864864423359769072789712788640926L, 0.741531185599394439863864773280788L,
    0.586087235467691130294144845693013L, 0.405845151377397166906606412076961L,
    0.207784955007898467600689403773245L, 0.000000000000000000000000000000000L};
constexpr std::array<long double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970L, 0.063092092629978553290700663189204L,
    0.104790010322250183839876322541518L, 0.140653259715525918745189590510238L,
    0.169004726639267902826583426598550L, 0.190350578064785409913256402421014L,
    0.204432940075298892414161999234649L, 0.209482141084727828012999174891714L};
// Gauss weights for the Kronrod nodes with odd index (and the centre).
constexpr std::array<long double, 4> kGaussWeights = {
    0.129484966168869693270611432679082L, 0.279705391489276667901467771423780L,
    0.381830050505118944950369775488975L, 0.417959183673469387755102040816327L};

template <class F>
LongComplex kronrod15(F&& f, long double a, long double b, long double& error) {
  const long double centre = (a + b) / 2;
  const long double half = (b - a) / 2;
  const LongComplex fc = f(centre);
  LongComplex kronrod = fc * kKronrodWeights[7];
  LongComplex gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const long double dx = half * kKronrodNodes[j];
    const LongComplex sum = f(centre - dx) + f(centre + dx);
    kronrod += kKronrodWeights[j] * sum;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * sum;
  }
  error = std::abs((kronrod - gauss) * half);
  return kronrod * half;
}

template <class F>
LongComplex adaptive(F&& f, long double a, long double b, long double tol, int depth) {
  long double error = 0;
  const LongComplex whole = kronrod15(f, a, b, error);
  if (error <= tol || depth >= 40) return whole;
  const long double mid = (a + b) / 2;
  return adaptive(f, a, mid, tol / 2, depth + 1) + adaptive(f, mid, b, tol / 2, depth + 1);
}

}  // namespace detail

// Integral of f over [a, b] split into panels no wider than max_panel, each
// refined adaptively to an absolute tolerance of tol per unit length.
template <class F>
LongComplex integrate(F&& f, long double a, long double b, long double tol = 1e-16L,
                      long double max_panel = 0.05L) {
  if (a == b) return {0, 0};
  const long double width = std::abs(b - a);
  const long long panels = static_cast<long long>(std::ceil(width / max_panel));
  const long double step = (b - a) / panels;
  LongComplex total{0, 0};
  for (long long k = 0; k < panels; ++k) {
    const long double lo = a + step * k;
    const long double hi = (k + 1 == panels) ? b : lo + step;
    total += detail::adaptive(f, lo, hi, tol * std::abs(step), 0);
  }
  return total;
}

// Independent reference for int_0^z exp(i pi t^2 / 2) dt.
inline std::complex<double> fresnel_quadrature(double z) {
  auto integrand = [](long double t) {
    const long double phase = std::numbers::pi_v<long double> * t * t / 2;
    return LongComplex(std::cos(phase), std::sin(phase));
  };
  const LongComplex v = integrate(integrand, 0.0L, static_cast<long double>(z));
  return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

}  // namespace abflux::testing
