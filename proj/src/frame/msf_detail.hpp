#pragma once

#include "dilatekit/frame.hpp"

namespace dilatekit::frame::detail {

Rational pow2(std::int64_t e);
const Integer& level_shift(const LatticePoint& p);
/// 2^{-j} E intersected with 2^{-j'} E.
IntervalSet overlap(const IntervalSet& E, std::int64_t j, std::int64_t jp);
/// 2^{(j+j')/2} int_I e^{-2 pi i omega xi} d xi.
cd overlap_integral(const IntervalSet& I, std::int64_t j, std::int64_t jp, const Rational& omega);
/// k 2^j - k' 2^{j'}
Rational omega(const Integer& k, std::int64_t j, const Integer& kp, std::int64_t jp);

}  // namespace dilatekit::frame::detail
