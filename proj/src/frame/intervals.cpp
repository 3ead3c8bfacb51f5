#include <algorithm>
#include <map>

#include "dilatekit/errors.hpp"
#include "dilatekit/frame.hpp"
#include "frame/msf_detail.hpp"

namespace dilatekit::frame {

IntervalSet::IntervalSet(std::vector<Interval> pieces) {
  for (const auto& p : pieces)
    if (p.a > p.b) throw InvalidInput("interval with a > b: [" + p.a.str() + ", " + p.b.str() + ")");
  std::erase_if(pieces, [](const Interval& p) { return p.a == p.b; });
  std::sort(pieces.begin(), pieces.end(), [](const Interval& x, const Interval& y) { return x.a < y.a; });
  for (auto& p : pieces) {
    if (!pieces_.empty() && p.a <= pieces_.back().b) {
      pieces_.back().b = std::max(pieces_.back().b, p.b);
    } else {
      pieces_.push_back(std::move(p));
    }
  }
}

IntervalSet IntervalSet::symmetric(const Rational& a, const Rational& b) {
  return IntervalSet({{a, b}, {-b, -a}});
}

Rational IntervalSet::measure() const {
  Rational m = 0;
  for (const auto& p : pieces_) m += p.b - p.a;
  return m;
}

IntervalSet IntervalSet::scaled(const Rational& s) const {
  if (s <= 0) throw InvalidInput("interval scale must be positive");
  std::vector<Interval> out;
  for (const auto& p : pieces_) out.push_back({p.a * s, p.b * s});
  return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::shifted(const Rational& q) const {
  std::vector<Interval> out;
  for (const auto& p : pieces_) out.push_back({p.a + q, p.b + q});
  return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::intersect(const IntervalSet& o) const {
  std::vector<Interval> out;
  std::size_t i = 0, j = 0;
  while (i < pieces_.size() && j < o.pieces_.size()) {
    const auto& x = pieces_[i];
    const auto& y = o.pieces_[j];
    const Rational a = std::max(x.a, y.a);
    const Rational b = std::min(x.b, y.b);
    if (a < b) out.push_back({a, b});
    if (x.b < y.b)
      ++i;
    else
      ++j;
  }
  return IntervalSet(std::move(out));
}

bool IntervalSet::touches_zero() const {
  for (const auto& p : pieces_)
    if (p.a <= 0 && p.b >= 0) return true;
  return false;
}

std::string IntervalSet::to_string() const {
  if (pieces_.empty()) return "{}";
  std::string s;
  for (const auto& p : pieces_) {
    if (!s.empty()) s += " U ";
    s += "[" + p.a.str() + ", " + p.b.str() + ")";
  }
  return s;
}

Rational parse_rational(const std::string& text) {
  try {
    if (auto slash = text.find('/'); slash != std::string::npos) {
      const Integer num(text.substr(0, slash));
      const Integer den(text.substr(slash + 1));
      if (den == 0) throw InvalidInput("zero denominator in '" + text + "'");
      return Rational(num, den);
    }
    if (auto dot = text.find('.'); dot != std::string::npos) {
      std::string digits = text.substr(0, dot) + text.substr(dot + 1);
      const std::size_t frac = text.size() - dot - 1;
      if (digits.empty() || digits == "-" || digits == "+") throw InvalidInput("bad number '" + text + "'");
      Integer den = 1;
      for (std::size_t i = 0; i < frac; ++i) den *= 10;
      return Rational(Integer(digits), den);
    }
    return Rational(Integer(text));
  } catch (const InvalidInput&) {
    throw;
  } catch (const std::exception&) {
    throw InvalidInput("cannot parse rational '" + text + "'");
  }
}

namespace {

using detail::pow2;

// Largest multiplicity deviation |count - 1| over the cells of [lo, hi)
// cut by the given intervals.
Integer cell_deviation(const std::vector<Interval>& pieces, const Rational& lo, const Rational& hi) {
  std::vector<Rational> cuts{lo, hi};
  for (const auto& p : pieces) {
    cuts.push_back(std::clamp(p.a, lo, hi));
    cuts.push_back(std::clamp(p.b, lo, hi));
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  Integer worst = 0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const Rational mid = (cuts[c] + cuts[c + 1]) / 2;
    Integer count = 0;
    for (const auto& p : pieces)
      if (p.a <= mid && mid < p.b) ++count;
    worst = std::max(worst, count > 1 ? Integer(count - 1) : Integer(1 - count));
  }
  return worst;
}

// Largest number of intervals covering a common cell of positive length.
Integer max_overlap(const std::vector<Interval>& pieces) {
  std::map<Rational, long> events;  // ends sort with starts at equal keys; +1/-1 net
  for (const auto& p : pieces) {
    events[p.a] += 1;
    events[p.b] -= 1;
  }
  long cur = 0, best = 0;
  for (const auto& [x, d] : events) {
    cur += d;
    best = std::max(best, cur);
  }
  return best;
}

}  // namespace

Integer calderon_check(const IntervalSet& E, std::int64_t j_lo, std::int64_t j_hi) {
  Integer worst = 0;
  const std::pair<Rational, Rational> domains[] = {{Rational(1), Rational(2)}, {Rational(-2), Rational(-1)}};
  for (const auto& [lo, hi] : domains) {
    const IntervalSet fundamental({{lo, hi}});
    std::vector<Interval> pieces;
    for (std::int64_t j = j_lo; j <= j_hi; ++j) {
      const IntervalSet cut = E.scaled(pow2(j)).intersect(fundamental);
      pieces.insert(pieces.end(), cut.intervals().begin(), cut.intervals().end());
    }
    worst = std::max(worst, cell_deviation(pieces, lo, hi));
  }
  return worst;
}

Integer calderon_check(const IntervalSet& E) {
  if (E.empty()) return 1;
  if (E.touches_zero()) throw InvalidInput("calderon_check: E must be bounded away from 0 for the automatic range");
  // 2^j E meets [1,2) or [-2,-1) only while 2^j min|E| < 2 and 2^j max|E| > 1.
  Rational lo = -1, hi = 0;
  for (const auto& p : E.intervals()) {
    const Rational near = p.a > 0 ? p.a : -p.b;
    const Rational far = p.a > 0 ? p.b : -p.a;
    if (lo < 0 || near < lo) lo = near;
    hi = std::max(hi, far);
  }
  std::int64_t j_lo = 0, j_hi = 0;
  while (pow2(j_lo) * hi > 1) --j_lo;
  while (pow2(j_hi) * lo < 2) ++j_hi;
  return calderon_check(E, j_lo, j_hi);
}

Integer translation_orthogonality_check(const IntervalSet& E, std::int64_t q_max) {
  if (E.empty()) return 0;
  const Rational width = E.intervals().back().b - E.intervals().front().a;
  Integer worst = 0;
  for (std::int64_t q = 1; q <= q_max; q += 2) {
    for (const std::int64_t s : {q, -q}) {
      std::vector<Interval> pieces;
      // 2^{-j} E and its shift by -s can only meet while the hull is wider than |s|.
      for (std::int64_t j = 0; width * pow2(-j) > q; ++j) {
        const IntervalSet Ej = E.scaled(pow2(-j));
        const IntervalSet both = Ej.intersect(Ej.shifted(Rational(-s)));
        pieces.insert(pieces.end(), both.intervals().begin(), both.intervals().end());
      }
      worst = std::max(worst, max_overlap(pieces));
    }
  }
  return worst;
}

}  // namespace dilatekit::frame
