#include "abflux/fresnel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "abflux/errors.hpp"

namespace abflux {
namespace {

using LongComplex = std::complex<long double>;

constexpr long double kPi = std::numbers::pi_v<long double>;
constexpr int kMaxIterations = 400;

}  // namespace

namespace detail {

// Ei(z) = sum_n (i pi/2)^n z^(2n+1) / (n! (2n+1)). The terms peak near
// n ~ pi z^2 / 2, so at z = 2.5 about three digits cancel; the extended
// precision accumulator keeps the result well inside 1e-12.
ComplexAmplitude fresnel_power_series(double z) {
  const long double x = z;
  const LongComplex step(0.0L, kPi * x * x / 2.0L);
  LongComplex term(1.0L, 0.0L);  // (i pi x^2 / 2)^n / n!
  LongComplex sum = x;
  for (int n = 1; n < kMaxIterations; ++n) {
    term *= step / static_cast<long double>(n);
    const LongComplex contribution = term * (x / static_cast<long double>(2 * n + 1));
    sum += contribution;
    if (std::abs(contribution) <= 1e-21L * std::abs(sum)) break;
  }
  return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

// Modified Lentz evaluation of the continued fraction for the complementary
// error function, expressed through the auxiliary function
//   Ei(x) = (1+i)/2 * (1 - exp(i pi x^2 / 2) * h),  h = (1-i) x * CF(x).
ComplexAmplitude fresnel_continued_fraction(double z) {
  const long double x = z;
  constexpr long double tiny = 1e-4000L;
  LongComplex b(1.0L, -kPi * x * x);
  LongComplex c(1.0L / tiny, 0.0L);
  LongComplex d = 1.0L / b;
  LongComplex h = d;
  long double n = -1.0L;
  for (int k = 2; k <= kMaxIterations; ++k) {
    n += 2.0L;
    const long double a = -n * (n + 1.0L);
    b += 4.0L;
    d = 1.0L / (a * d + b);
    c = b + a / c;
    const LongComplex delta = c * d;
    h *= delta;
    if (std::abs(delta.real() - 1.0L) + std::abs(delta.imag()) < 1e-19L) break;
  }
  h *= LongComplex(x, -x);
  const long double phase = kPi * x * x / 2.0L;
  const LongComplex rotor(std::cos(phase), std::sin(phase));
  const LongComplex ei = LongComplex(0.5L, 0.5L) * (1.0L - rotor * h);
  return {static_cast<double>(ei.real()), static_cast<double>(ei.imag())};
}

}  // namespace detail

ComplexAmplitude fresnel_ei(double z) {
  if (!std::isfinite(z)) throw DomainError("fresnel_ei: argument must be finite");
  if (z == 0.0) return {0.0, 0.0};
  const double ax = std::abs(z);
  const ComplexAmplitude value = ax <= detail::kFresnelSeriesLimit
                                     ? detail::fresnel_power_series(ax)
                                     : detail::fresnel_continued_fraction(ax);
  return z < 0.0 ? -value : value;
}

std::vector<ComplexAmplitude> fresnel_ei_grid(std::span<const double> zs) {
  std::vector<ComplexAmplitude> out;
  out.reserve(zs.size());
  for (std::size_t i = 0; i < zs.size(); ++i) {
    if (!std::isfinite(zs[i]))
      throw DomainError("fresnel_ei_grid: non-finite entry at index " + std::to_string(i));
    out.push_back(fresnel_ei(zs[i]));
  }
  return out;
}

}  // namespace abflux
