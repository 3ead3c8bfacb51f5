#include <cmath>

#include "dilatekit/kernels.hpp"

namespace dilatekit::simd::scalar {

double abs_sum(std::span<const cd> x) {
  double s = 0.0;
  for (const auto& z : x) s += std::sqrt(z.real() * z.real() + z.imag() * z.imag());
  return s;
}

double max_abs(std::span<const cd> x) {
  double m = 0.0;
  for (const auto& z : x) m = std::max(m, std::sqrt(z.real() * z.real() + z.imag() * z.imag()));
  return m;
}

double max_abs_diff(std::span<const cd> x, std::span<const cd> y) {
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double re = x[i].real() - y[i].real();
    const double im = x[i].imag() - y[i].imag();
    m = std::max(m, std::sqrt(re * re + im * im));
  }
  return m;
}

cd weighted_dot(std::span<const cd> x, std::span<const cd> y, std::span<const double> w) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double wi = w.empty() ? 1.0 : w[i];
    re += (x[i].real() * y[i].real() + x[i].imag() * y[i].imag()) * wi;
    im += (x[i].imag() * y[i].real() - x[i].real() * y[i].imag()) * wi;
  }
  return {re, im};
}

}  // namespace dilatekit::simd::scalar
