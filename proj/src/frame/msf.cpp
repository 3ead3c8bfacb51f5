#include <cmath>
#include <numbers>

#include "dilatekit/errors.hpp"
#include "dilatekit/frame.hpp"
#include "frame/msf_detail.hpp"

namespace dilatekit::frame {

namespace detail {

Rational pow2(std::int64_t e) {
  Integer p = 1;
  p <<= static_cast<unsigned>(e < 0 ? -e : e);
  return e < 0 ? Rational(1, p) : Rational(p);
}

const Integer& level_shift(const LatticePoint& p) {
  const auto* v = std::get_if<group::IntVector>(&p.gamma);
  if (!v || v->v.size() != 1) throw InvalidInput("MSF inner product needs the dyadic family (Gamma0 = Z)");
  return v->v[0];
}

IntervalSet overlap(const IntervalSet& E, std::int64_t j, std::int64_t jp) {
  return E.scaled(pow2(-j)).intersect(E.scaled(pow2(-jp)));
}

cd overlap_integral(const IntervalSet& I, std::int64_t j, std::int64_t jp, const Rational& omega) {
  // 2^{(j+j')/2}, split into an exact power of two and an optional sqrt(2).
  const std::int64_t s = j + jp;
  const std::int64_t half = s >= 0 ? s / 2 : -((-s + 1) / 2);
  const double root = (s - 2 * half) == 1 ? std::numbers::sqrt2 : 1.0;

  if (omega == 0) return std::ldexp(root * static_cast<double>(I.measure()), static_cast<int>(half));

  // int_a^b e^{-2 pi i w x} dx = e^{-i pi w (a+b)} sin(pi w (b-a)) / (pi w).
  cd acc = 0.0;
  for (const auto& piece : I.intervals()) {
    const cd phase = exp_i_pi(-omega * (piece.a + piece.b));
    acc += phase * sin_pi(omega * (piece.b - piece.a));
  }
  const double denom = std::numbers::pi * static_cast<double>(omega);
  return std::ldexp(root, static_cast<int>(half)) * (acc / denom);
}

Rational omega(const Integer& k, std::int64_t j, const Integer& kp, std::int64_t jp) {
  return Rational(k) * pow2(j) - Rational(kp) * pow2(jp);
}

}  // namespace detail

cd msf_inner_product(const IntervalSet& E, const LatticePoint& p, const LatticePoint& q) {
  const Integer& k = detail::level_shift(p);
  const Integer& kp = detail::level_shift(q);
  const IntervalSet I = detail::overlap(E, p.j, q.j);
  if (I.empty()) return 0.0;
  // Conjugate-linear in the first slot: the phase is e^{-2 pi i (k' 2^j' - k 2^j) xi}.
  return detail::overlap_integral(I, p.j, q.j, detail::omega(kp, q.j, k, p.j));
}

}  // namespace dilatekit::frame
