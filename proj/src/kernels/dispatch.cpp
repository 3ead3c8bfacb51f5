#include <cstdlib>
#include <string>

#include "dilatekit/kernels.hpp"

namespace dilatekit::simd {

namespace {

struct Table {
  Isa isa;
  double (*abs_sum)(std::span<const cd>);
  double (*max_abs)(std::span<const cd>);
  double (*max_abs_diff)(std::span<const cd>, std::span<const cd>);
  cd (*weighted_dot)(std::span<const cd>, std::span<const cd>, std::span<const double>);
};

Table select() {
  const char* env = std::getenv("DILATEKIT_SIMD");
  const bool force_scalar = env && std::string(env) == "scalar";
  if (!force_scalar && cpu_has_avx2())
    return {Isa::Avx2, avx2::abs_sum, avx2::max_abs, avx2::max_abs_diff, avx2::weighted_dot};
  return {Isa::Scalar, scalar::abs_sum, scalar::max_abs, scalar::max_abs_diff, scalar::weighted_dot};
}

const Table& table() {
  static const Table t = select();
  return t;
}

}  // namespace

bool cpu_has_avx2() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa active_isa() { return table().isa; }

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

double abs_sum(std::span<const cd> x) { return table().abs_sum(x); }
double max_abs(std::span<const cd> x) { return table().max_abs(x); }
double max_abs_diff(std::span<const cd> x, std::span<const cd> y) { return table().max_abs_diff(x, y); }
cd weighted_dot(std::span<const cd> x, std::span<const cd> y, std::span<const double> w) {
  return table().weighted_dot(x, y, w);
}

}  // namespace dilatekit::simd
