#pragma once

// Gram matrices <pi(x) psi, pi(y) psi> over a window, for three kinds of
// input: MSF wavelets given by their frequency support, explicit vector
// tables, and sampled 2D generators under the shearlet or Heisenberg
// multiplicity-one representation.
//
// Inner products are conjugate-linear in the first argument, <f, g> = f* g,
// matching K = V* V for the Kolmogorov factorization.
//
// Convention: pi(u^j t^k) psi(x) = 2^{-j/2} psi(2^{-j} x - k), so that
// pi(u) pi(t) pi(u)^{-1} = pi(t^2). In frequency, level j lives on 2^{-j} E.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dilatekit/group.hpp"
#include "dilatekit/linalg.hpp"

namespace dilatekit::frame {

using group::Integer;
using group::LatticePoint;
using group::Rational;
using group::Window;

/// Half-open interval [a, b).
struct Interval {
  Rational a, b;
  bool operator==(const Interval&) const = default;
};

/// Finite union of half-open intervals, kept sorted, disjoint and with
/// touching pieces merged.
class IntervalSet {
 public:
  IntervalSet() = default;
  /// Throws InvalidInput if some a > b. Empty pieces are dropped.
  explicit IntervalSet(std::vector<Interval> pieces);
  /// [a, b) together with its mirror [-b, -a).
  static IntervalSet symmetric(const Rational& a, const Rational& b);

  const std::vector<Interval>& intervals() const { return pieces_; }
  bool empty() const { return pieces_.empty(); }
  Rational measure() const;
  /// s * E for s > 0.
  IntervalSet scaled(const Rational& s) const;
  IntervalSet shifted(const Rational& q) const;
  IntervalSet intersect(const IntervalSet& o) const;
  /// Does 0 lie in the closure of the set?
  bool touches_zero() const;
  std::string to_string() const;

  bool operator==(const IntervalSet&) const = default;

 private:
  std::vector<Interval> pieces_;
};

/// Parses "p/q" or an integer or a decimal like "0.125" into an exact rational.
Rational parse_rational(const std::string& s);

// ---------------------------------------------------------------- MSF

/// <psi_p, psi_q> for psi^ = 1_E. Intersections and phases are exact
/// rationals; only the final cos/sin and division are floating point.
/// Throws InvalidInput unless both points carry a rank-1 IntVector.
cd msf_inner_product(const IntervalSet& E, const LatticePoint& p, const LatticePoint& q);

/// max over xi of |sum_j 1_{2^j E}(xi) - 1|, computed cell by cell on the
/// fundamental domains [1,2) and [-2,-1). The auto range needs E bounded
/// away from 0 (InvalidInput otherwise); the explicit overload sums j in
/// [j_lo, j_hi] only.
Integer calderon_check(const IntervalSet& E);
Integer calderon_check(const IntervalSet& E, std::int64_t j_lo, std::int64_t j_hi);

/// max over odd |q| <= q_max and over xi of
/// t_q(xi) = sum_{j>=0} 1_E(2^j xi) 1_E(2^j (xi + q)).
Integer translation_orthogonality_check(const IntervalSet& E, std::int64_t q_max);

// ---------------------------------------------------------------- sampled 2D

/// Uniform grid, samples row-major: values[iy * nx + ix] at
/// (x0 + ix dx, y0 + iy dy).
struct Grid2D {
  double x0 = 0, y0 = 0, dx = 1, dy = 1;
  int nx = 0, ny = 0;
  std::vector<cd> values;

  double x(int ix) const { return x0 + ix * dx; }
  double y(int iy) const { return y0 + iy * dy; }
  /// Bilinear interpolation; zero outside the grid.
  cd sample(double x, double y) const;
  Grid2D same_shape() const;
};

/// a^{-3/2} f(a^{-2} x1, a^{-1} x2) dilation, t1 -> x1 shift, t2 -> x2 shift,
/// t3 -> shear f(x1 - x2, x2). Group: Heisenberg(a, a).
struct ShearletRep {
  int a = 2;
};
/// On L^2(|lambda| dlambda dt): t1 -> e^{2 pi i lambda}, t2 -> e^{-2 pi i lambda t},
/// t3 -> shift t by 1, u -> b sqrt(a) f(ab lambda, t / a). Group: Heisenberg(a, b).
struct HeisenbergMult1Rep {
  int a = 2, b = 2;
};
using RepPreset = std::variant<ShearletRep, HeisenbergMult1Rep>;

group::MonomorphismSpec group_of(const RepPreset& rep);
std::string rep_name(const RepPreset& rep);

/// pi(u^j gamma) f resampled on f's grid.
Grid2D apply_rep(const RepPreset& rep, const LatticePoint& p, const Grid2D& f);
/// Quadrature weights: dx dy, times |lambda| for the Heisenberg preset.
std::vector<double> quadrature_weights(const RepPreset& rep, const Grid2D& f);
double grid_norm(const RepPreset& rep, const Grid2D& f);

// ---------------------------------------------------------------- systems

struct MSFDyadic {
  IntervalSet E;
};
struct ExplicitVectors {
  int d = 0;
  std::vector<std::pair<LatticePoint, CVector>> vecs;
};
struct BandLimited2D {
  RepPreset rep;
  Grid2D generator;
};
using FrameSystemSpec = std::variant<MSFDyadic, ExplicitVectors, BandLimited2D>;

std::string kind_name(const FrameSystemSpec& s);

struct GramMatrix {
  Window window;
  CMatrix G;
};

struct GramOptions {
  bool parallel = false;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Throws InvalidInput when the window's family does not fit the system,
/// or when an explicit table misses a window point.
GramMatrix gram_matrix(const FrameSystemSpec& spec, const Window& window, const GramOptions& opts = {});

}  // namespace dilatekit::frame
