#include "dilatekit/linalg.hpp"

#include <cmath>
#include <numbers>
#include <span>

#include "dilatekit/kernels.hpp"

namespace dilatekit {

namespace {

std::span<const cd> column(const CMatrix& M, Eigen::Index j) {
  return {M.data() + j * M.rows(), static_cast<std::size_t>(M.rows())};
}

std::span<const cd> all(const CMatrix& M) { return {M.data(), static_cast<std::size_t>(M.size())}; }

}  // namespace

double induced_one_norm(const CMatrix& M) {
  double m = 0.0;
  for (Eigen::Index j = 0; j < M.cols(); ++j) m = std::max(m, simd::abs_sum(column(M, j)));
  return m;
}

double max_abs(const CMatrix& M) { return simd::max_abs(all(M)); }

double max_abs_diff(const CMatrix& A, const CMatrix& B) {
  if (A.rows() != B.rows() || A.cols() != B.cols()) return std::numeric_limits<double>::infinity();
  return simd::max_abs_diff(all(A), all(B));
}

double hermitian_error(const CMatrix& M) {
  const CMatrix Mh = M.adjoint();
  return max_abs_diff(M, Mh);
}

double unitarity_error(const CMatrix& U) {
  if (U.size() == 0) return 0.0;
  CMatrix E = U.adjoint() * U;
  E.diagonal().array() -= 1.0;
  return induced_one_norm(E);
}

CMatrix unitary_power(const CMatrix& M, const boost::multiprecision::cpp_int& e) {
  CMatrix base = e < 0 ? CMatrix(M.adjoint()) : M;
  boost::multiprecision::cpp_int k = e < 0 ? boost::multiprecision::cpp_int(-e) : e;
  CMatrix r = CMatrix::Identity(M.rows(), M.cols());
  while (k > 0) {
    if (k & 1) r = r * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return r;
}

CVector apply_power(const CMatrix& M, const boost::multiprecision::cpp_int& e, const CVector& v) {
  constexpr int kStepLimit = 64;
  if (e > kStepLimit || e < -kStepLimit) return unitary_power(M, e) * v;
  const int k = static_cast<int>(e);
  CVector r = v;
  if (k >= 0) {
    for (int i = 0; i < k; ++i) r = M * r;
  } else {
    for (int i = 0; i < -k; ++i) r = M.adjoint() * r;
  }
  return r;
}

namespace {

using Rational = boost::multiprecision::cpp_rational;

// q mod 2 in [0, 2), exact.
Rational mod2(const Rational& q) {
  using boost::multiprecision::cpp_int;
  const cpp_int num = numerator(q);
  const cpp_int den = denominator(q);
  cpp_int r = num % (2 * den);
  if (r < 0) r += 2 * den;
  return Rational(r, den);
}

// (cos(pi q), sin(pi q)) for q in [0, 2), reduced to the first octant so the
// library call sees an argument in [0, pi/4].
std::pair<double, double> cos_sin_pi(Rational q) {
  using std::numbers::pi;
  double cs = 1.0, sn = 1.0;  // sign flips
  if (q >= 1) {
    q -= 1;
    cs = -cs;
    sn = -sn;
  }
  if (q > Rational(1, 2)) {  // pi - x
    q = 1 - q;
    cs = -cs;
  }
  bool swap = false;
  if (q > Rational(1, 4)) {  // pi/2 - x
    q = Rational(1, 2) - q;
    swap = true;
  }
  double c, s;
  if (q == 0) {
    c = 1.0;
    s = 0.0;
  } else if (q == Rational(1, 4)) {
    c = s = std::numbers::sqrt2 / 2.0;
  } else {
    const double x = pi * static_cast<double>(q);
    c = std::cos(x);
    s = std::sin(x);
  }
  if (swap) std::swap(c, s);
  return {cs * c, sn * s};
}

}  // namespace

cd exp_i_pi(const Rational& q) {
  auto [c, s] = cos_sin_pi(mod2(q));
  return {c, s};
}

double sin_pi(const Rational& q) { return cos_sin_pi(mod2(q)).second; }

}  // namespace dilatekit
