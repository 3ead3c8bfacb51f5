#pragma once

// Exact arithmetic for Gamma0, the monomorphism alpha, the pseudo-lattice
// points (j, gamma) = u^j gamma and the ascending HNN normal form u^-m gamma u^n.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace dilatekit::group {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using IntMatrix = std::vector<std::vector<Integer>>;  // row-major, square

enum class Family { FreeAbelian, Heisenberg, FreeNilpotent };

std::string family_name(Family f);

struct FreeAbelian {
  IntMatrix A;
};
struct Heisenberg {
  Integer a, b;
};
struct FreeNilpotent {
  std::vector<Integer> exps;
};

class MonomorphismSpec {
 public:
  /// Throws InvalidInput if A is not square or det(A) == 0.
  static MonomorphismSpec free_abelian(IntMatrix A);
  static MonomorphismSpec heisenberg(Integer a, Integer b);
  static MonomorphismSpec free_nilpotent(std::vector<Integer> exps);
  /// BS(1,2): n = 1, A = [2].
  static MonomorphismSpec bs12();

  Family family() const;
  /// Number of Gamma0 generators (t1..tn, plus z_ij for F_n).
  std::size_t rank() const { return rank_; }
  /// Length of the exponent tuple of an element.
  std::size_t exponent_length() const;
  /// Generator names in canonical order: t1..tn then z1_2, z1_3, ...
  std::vector<std::string> generator_names() const;

  const FreeAbelian& abelian() const;
  const Heisenberg& heis() const;
  const FreeNilpotent& nilpotent() const;

  bool operator==(const MonomorphismSpec& o) const;

 private:
  std::variant<FreeAbelian, Heisenberg, FreeNilpotent> v_;
  std::size_t rank_ = 0;
};

struct IntVector {
  std::vector<Integer> v;
  bool operator==(const IntVector&) const = default;
};
/// t1^m t2^l t3^k.
struct HeisTriple {
  Integer m, l, k;
  bool operator==(const HeisTriple&) const = default;
};
/// t1^e1 .. tn^en * prod_{i<j} z_ij^c_ij; z stored as (0,1),(0,2),..,(n-2,n-1).
struct NilElement {
  std::vector<Integer> t;
  std::vector<Integer> z;
  bool operator==(const NilElement&) const = default;
};

using Gamma0Element = std::variant<IntVector, HeisTriple, NilElement>;

struct LatticePoint {
  std::int64_t j = 0;
  Gamma0Element gamma;
  bool operator==(const LatticePoint&) const = default;
};

/// u^{-m} gamma u^{n}, m, n >= 0.
struct GroupWord {
  std::int64_t m = 0;
  Gamma0Element gamma;
  std::int64_t n = 0;
  bool operator==(const GroupWord&) const = default;
};

Gamma0Element identity(const MonomorphismSpec& spec);
/// The i-th generator (0-based, order of generator_names()).
Gamma0Element generator(const MonomorphismSpec& spec, std::size_t i);
bool is_identity(const Gamma0Element& x);
bool matches(const MonomorphismSpec& spec, const Gamma0Element& x);

/// Flattened exponent tuple (abelian v; Heisenberg (m,l,k); F_n t then z).
std::vector<Integer> exponents(const Gamma0Element& x);
Gamma0Element from_exponents(const MonomorphismSpec& spec, const std::vector<Integer>& e);

Gamma0Element gamma0_mul(const MonomorphismSpec& spec, const Gamma0Element& x, const Gamma0Element& y);
Gamma0Element gamma0_inv(const MonomorphismSpec& spec, const Gamma0Element& x);
Gamma0Element gamma0_pow(const MonomorphismSpec& spec, const Gamma0Element& x, const Integer& e);
Gamma0Element alpha_apply(const MonomorphismSpec& spec, const Gamma0Element& x);
std::optional<Gamma0Element> alpha_unapply(const MonomorphismSpec& spec, const Gamma0Element& x);
std::optional<Gamma0Element> alpha_power(const MonomorphismSpec& spec, std::int64_t p, const Gamma0Element& x);

/// alpha(g) for the g-th generator as a product of generator powers,
/// (generator index, exponent) in product order (left to right).
std::vector<std::pair<std::size_t, Integer>> alpha_of_generator(const MonomorphismSpec& spec, std::size_t g);
/// x as a product of generator powers in product order (left to right).
std::vector<std::pair<std::size_t, Integer>> generator_factors(const MonomorphismSpec& spec, const Gamma0Element& x);

std::optional<LatticePoint> lattice_mul(const MonomorphismSpec& spec, const LatticePoint& p, const LatticePoint& q);

GroupWord reduce(const MonomorphismSpec& spec, GroupWord w);
bool is_reduced(const MonomorphismSpec& spec, const GroupWord& w);
GroupWord word_mul(const MonomorphismSpec& spec, const GroupWord& w, const GroupWord& w2);
GroupWord word_inv(const MonomorphismSpec& spec, const GroupWord& w);
GroupWord word_identity(const MonomorphismSpec& spec);
GroupWord word_u(const MonomorphismSpec& spec, std::int64_t power);
GroupWord word_gamma(const MonomorphismSpec& spec, const Gamma0Element& g);
/// (j, gamma) -> u^j gamma as a reduced word.
GroupWord word_from_lattice(const MonomorphismSpec& spec, const LatticePoint& p);
/// Inverse chart: a word lies on the pseudo-lattice iff it is u^j gamma.
std::optional<LatticePoint> lattice_from_word(const MonomorphismSpec& spec, const GroupWord& w);

std::string to_string(const MonomorphismSpec& spec, const Gamma0Element& x);
std::string to_string(const MonomorphismSpec& spec, const GroupWord& w);
std::string to_string(const MonomorphismSpec& spec, const LatticePoint& p);
/// Parses a product of generator powers, e.g. "u^-1 t1^2 u", "t3 t2", "z1_2^3", "e".
/// Throws InvalidInput on unknown tokens.
GroupWord parse_word(const MonomorphismSpec& spec, const std::string& text);

/// Finite truncation of the pseudo-lattice: levels [j_min, j_max] times the
/// box of Gamma0 elements with exponent sup-norm <= radius.
class Window {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Window() = default;
  Window(MonomorphismSpec spec, std::int64_t j_min, std::int64_t j_max, std::int64_t radius);

  const MonomorphismSpec& spec() const { return *spec_; }
  std::int64_t j_min() const { return j_min_; }
  std::int64_t j_max() const { return j_max_; }
  std::int64_t radius() const { return radius_; }
  std::size_t levels() const { return static_cast<std::size_t>(j_max_ - j_min_ + 1); }
  std::size_t gammas_per_level() const { return gammas_.size(); }
  std::size_t size() const { return levels() * gammas_.size(); }
  const std::vector<Gamma0Element>& gammas() const { return gammas_; }

  LatticePoint point(std::size_t idx) const;
  std::int64_t level(std::size_t idx) const;
  std::size_t gamma_index(std::size_t idx) const { return idx % gammas_.size(); }
  std::size_t gamma_index_of(const Gamma0Element& g) const;
  std::size_t index_of(std::int64_t j, const Gamma0Element& g) const;
  std::size_t index_of(std::int64_t j, std::size_t gamma_idx) const;
  std::size_t index_of(const LatticePoint& p) const { return index_of(p.j, p.gamma); }

 private:
  std::optional<MonomorphismSpec> spec_;
  std::int64_t j_min_ = 0, j_max_ = 0, radius_ = 0;
  std::vector<Gamma0Element> gammas_;
};

Window enumerate_window(const MonomorphismSpec& spec, std::int64_t j_min, std::int64_t j_max, std::int64_t radius);

/// Exact determinant (Bareiss).
Integer determinant(const IntMatrix& A);
/// Exact inverse over Q. Throws InvalidInput if singular.
std::vector<std::vector<Rational>> rational_inverse(const IntMatrix& A);
/// Solves A y = x over Q; nullopt when singular.
std::optional<std::vector<Rational>> rational_solve(const IntMatrix& A, const std::vector<Integer>& x);

}  // namespace dilatekit::group
