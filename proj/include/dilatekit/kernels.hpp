#pragma once

// Hot inner loops with a scalar reference and an AVX2 variant. The variant is
// picked once at first use from the CPU flags; DILATEKIT_SIMD=scalar forces
// the reference path.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace dilatekit::simd {

using cd = std::complex<double>;

enum class Isa { Scalar, Avx2 };

Isa active_isa();
std::string_view isa_name(Isa isa);
bool cpu_has_avx2();

/// sum_i |x_i|
double abs_sum(std::span<const cd> x);
/// max_i |x_i| (0 for empty input)
double max_abs(std::span<const cd> x);
/// max_i |x_i - y_i|
double max_abs_diff(std::span<const cd> x, std::span<const cd> y);
/// sum_i x_i conj(y_i) w_i; w empty means unit weights.
cd weighted_dot(std::span<const cd> x, std::span<const cd> y, std::span<const double> w);

// Direct access to each variant, for equivalence tests.
namespace scalar {
double abs_sum(std::span<const cd> x);
double max_abs(std::span<const cd> x);
double max_abs_diff(std::span<const cd> x, std::span<const cd> y);
cd weighted_dot(std::span<const cd> x, std::span<const cd> y, std::span<const double> w);
}  // namespace scalar

namespace avx2 {
double abs_sum(std::span<const cd> x);
double max_abs(std::span<const cd> x);
double max_abs_diff(std::span<const cd> x, std::span<const cd> y);
cd weighted_dot(std::span<const cd> x, std::span<const cd> y, std::span<const double> w);
}  // namespace avx2

}  // namespace dilatekit::simd
