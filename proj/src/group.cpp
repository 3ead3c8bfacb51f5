#include "dilatekit/group.hpp"

#include <algorithm>
#include <sstream>

#include "dilatekit/errors.hpp"

namespace dilatekit::group {

namespace {

std::size_t pair_count(std::size_t n) { return n * (n - 1) / 2; }

// Position of z_ij (i < j) in NilElement::z.
std::size_t pair_index(std::size_t n, std::size_t i, std::size_t j) {
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

[[noreturn]] void mismatch() { throw InvalidInput("group element does not match the monomorphism family"); }

const IntVector& as_vec(const Gamma0Element& x) {
  if (auto p = std::get_if<IntVector>(&x)) return *p;
  mismatch();
}
const HeisTriple& as_heis(const Gamma0Element& x) {
  if (auto p = std::get_if<HeisTriple>(&x)) return *p;
  mismatch();
}
const NilElement& as_nil(const Gamma0Element& x) {
  if (auto p = std::get_if<NilElement>(&x)) return *p;
  mismatch();
}

void check(const MonomorphismSpec& spec, const Gamma0Element& x) {
  if (!matches(spec, x)) mismatch();
}

std::optional<Integer> exact_div(const Integer& x, const Integer& d) {
  if (x % d != 0) return std::nullopt;
  return x / d;
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::FreeAbelian: return "free_abelian";
    case Family::Heisenberg: return "heisenberg";
    case Family::FreeNilpotent: return "free_nilpotent";
  }
  return "?";
}

// ---------------------------------------------------------------- spec

MonomorphismSpec MonomorphismSpec::free_abelian(IntMatrix A) {
  const std::size_t n = A.size();
  if (n == 0) throw InvalidInput("free abelian rank must be positive");
  for (const auto& row : A)
    if (row.size() != n) throw InvalidInput("alpha matrix must be square");
  if (determinant(A) == 0) throw InvalidInput("alpha matrix is singular (det = 0)");
  MonomorphismSpec s;
  s.v_ = FreeAbelian{std::move(A)};
  s.rank_ = n;
  return s;
}

MonomorphismSpec MonomorphismSpec::heisenberg(Integer a, Integer b) {
  if (a < 1 || b < 1) throw InvalidInput("heisenberg exponents must be >= 1");
  MonomorphismSpec s;
  s.v_ = Heisenberg{std::move(a), std::move(b)};
  s.rank_ = 3;
  return s;
}

MonomorphismSpec MonomorphismSpec::free_nilpotent(std::vector<Integer> exps) {
  if (exps.size() < 2) throw InvalidInput("free nilpotent rank must be >= 2");
  for (const auto& e : exps)
    if (e < 1) throw InvalidInput("free nilpotent exponents must be >= 1");
  MonomorphismSpec s;
  const std::size_t n = exps.size();
  s.v_ = FreeNilpotent{std::move(exps)};
  s.rank_ = n + pair_count(n);
  return s;
}

MonomorphismSpec MonomorphismSpec::bs12() { return free_abelian({{Integer(2)}}); }

Family MonomorphismSpec::family() const {
  switch (v_.index()) {
    case 0: return Family::FreeAbelian;
    case 1: return Family::Heisenberg;
    default: return Family::FreeNilpotent;
  }
}

std::size_t MonomorphismSpec::exponent_length() const { return rank_; }

std::vector<std::string> MonomorphismSpec::generator_names() const {
  std::vector<std::string> names;
  if (family() == Family::FreeNilpotent) {
    const std::size_t n = nilpotent().exps.size();
    for (std::size_t i = 0; i < n; ++i) names.push_back("t" + std::to_string(i + 1));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        names.push_back("z" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
  } else {
    for (std::size_t i = 0; i < rank_; ++i) names.push_back("t" + std::to_string(i + 1));
  }
  return names;
}

const FreeAbelian& MonomorphismSpec::abelian() const { return std::get<FreeAbelian>(v_); }
const Heisenberg& MonomorphismSpec::heis() const { return std::get<Heisenberg>(v_); }
const FreeNilpotent& MonomorphismSpec::nilpotent() const { return std::get<FreeNilpotent>(v_); }

bool MonomorphismSpec::operator==(const MonomorphismSpec& o) const {
  if (v_.index() != o.v_.index()) return false;
  switch (family()) {
    case Family::FreeAbelian: return abelian().A == o.abelian().A;
    case Family::Heisenberg: return heis().a == o.heis().a && heis().b == o.heis().b;
    case Family::FreeNilpotent: return nilpotent().exps == o.nilpotent().exps;
  }
  return false;
}

// ---------------------------------------------------------------- elements

Gamma0Element identity(const MonomorphismSpec& spec) {
  switch (spec.family()) {
    case Family::FreeAbelian: return IntVector{std::vector<Integer>(spec.rank(), 0)};
    case Family::Heisenberg: return HeisTriple{0, 0, 0};
    case Family::FreeNilpotent: {
      const std::size_t n = spec.nilpotent().exps.size();
      return NilElement{std::vector<Integer>(n, 0), std::vector<Integer>(pair_count(n), 0)};
    }
  }
  mismatch();
}

Gamma0Element generator(const MonomorphismSpec& spec, std::size_t i) {
  if (i >= spec.rank()) throw InvalidInput("generator index out of range");
  std::vector<Integer> e(spec.exponent_length(), 0);
  e[i] = 1;
  return from_exponents(spec, e);
}

bool is_identity(const Gamma0Element& x) {
  for (const auto& e : exponents(x))
    if (e != 0) return false;
  return true;
}

bool matches(const MonomorphismSpec& spec, const Gamma0Element& x) {
  switch (spec.family()) {
    case Family::FreeAbelian: {
      auto p = std::get_if<IntVector>(&x);
      return p && p->v.size() == spec.rank();
    }
    case Family::Heisenberg: return std::holds_alternative<HeisTriple>(x);
    case Family::FreeNilpotent: {
      auto p = std::get_if<NilElement>(&x);
      const std::size_t n = spec.nilpotent().exps.size();
      return p && p->t.size() == n && p->z.size() == pair_count(n);
    }
  }
  return false;
}

std::vector<Integer> exponents(const Gamma0Element& x) {
  if (auto p = std::get_if<IntVector>(&x)) return p->v;
  if (auto p = std::get_if<HeisTriple>(&x)) return {p->m, p->l, p->k};
  const auto& z = std::get<NilElement>(x);
  std::vector<Integer> e = z.t;
  e.insert(e.end(), z.z.begin(), z.z.end());
  return e;
}

Gamma0Element from_exponents(const MonomorphismSpec& spec, const std::vector<Integer>& e) {
  if (e.size() != spec.exponent_length()) throw InvalidInput("exponent tuple has wrong length");
  switch (spec.family()) {
    case Family::FreeAbelian: return IntVector{e};
    case Family::Heisenberg: return HeisTriple{e[0], e[1], e[2]};
    case Family::FreeNilpotent: {
      const std::size_t n = spec.nilpotent().exps.size();
      return NilElement{std::vector<Integer>(e.begin(), e.begin() + n), std::vector<Integer>(e.begin() + n, e.end())};
    }
  }
  mismatch();
}

Gamma0Element gamma0_mul(const MonomorphismSpec& spec, const Gamma0Element& x, const Gamma0Element& y) {
  check(spec, x);
  check(spec, y);
  switch (spec.family()) {
    case Family::FreeAbelian: {
      auto r = as_vec(x);
      const auto& b = as_vec(y).v;
      for (std::size_t i = 0; i < r.v.size(); ++i) r.v[i] += b[i];
      return r;
    }
    case Family::Heisenberg: {
      // t3 t2 = t1 t2 t3: moving t3^k past t2^l' produces t1^{k l'}.
      const auto& p = as_heis(x);
      const auto& q = as_heis(y);
      return HeisTriple{p.m + q.m + p.k * q.l, p.l + q.l, p.k + q.k};
    }
    case Family::FreeNilpotent: {
      // t_j^a t_i^b = z_ij^{-ab} t_i^b t_j^a for i < j.
      const auto& p = as_nil(x);
      const auto& q = as_nil(y);
      const std::size_t n = p.t.size();
      NilElement r = p;
      for (std::size_t i = 0; i < n; ++i) r.t[i] += q.t[i];
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
          auto& c = r.z[pair_index(n, i, j)];
          c += q.z[pair_index(n, i, j)] - p.t[j] * q.t[i];
        }
      return r;
    }
  }
  mismatch();
}

Gamma0Element gamma0_inv(const MonomorphismSpec& spec, const Gamma0Element& x) {
  check(spec, x);
  switch (spec.family()) {
    case Family::FreeAbelian: {
      auto r = as_vec(x);
      for (auto& e : r.v) e = -e;
      return r;
    }
    case Family::Heisenberg: {
      const auto& p = as_heis(x);
      return HeisTriple{-p.m + p.k * p.l, -p.l, -p.k};
    }
    case Family::FreeNilpotent: {
      const auto& p = as_nil(x);
      const std::size_t n = p.t.size();
      NilElement r = p;
      for (auto& e : r.t) e = -e;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
          auto& c = r.z[pair_index(n, i, j)];
          c = -c - p.t[i] * p.t[j];
        }
      return r;
    }
  }
  mismatch();
}

Gamma0Element gamma0_pow(const MonomorphismSpec& spec, const Gamma0Element& x, const Integer& e) {
  Gamma0Element base = e < 0 ? gamma0_inv(spec, x) : x;
  Integer k = e < 0 ? Integer(-e) : e;
  Gamma0Element r = identity(spec);
  while (k > 0) {
    if (k & 1) r = gamma0_mul(spec, r, base);
    k >>= 1;
    if (k > 0) base = gamma0_mul(spec, base, base);
  }
  return r;
}

Gamma0Element alpha_apply(const MonomorphismSpec& spec, const Gamma0Element& x) {
  check(spec, x);
  switch (spec.family()) {
    case Family::FreeAbelian: {
      const auto& A = spec.abelian().A;
      const auto& v = as_vec(x).v;
      IntVector r{std::vector<Integer>(v.size(), 0)};
      for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) r.v[i] += A[i][j] * v[j];
      return r;
    }
    case Family::Heisenberg: {
      const auto& h = spec.heis();
      const auto& p = as_heis(x);
      return HeisTriple{h.a * h.b * p.m, h.b * p.l, h.a * p.k};
    }
    case Family::FreeNilpotent: {
      const auto& a = spec.nilpotent().exps;
      NilElement r = as_nil(x);
      const std::size_t n = a.size();
      for (std::size_t i = 0; i < n; ++i) r.t[i] *= a[i];
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) r.z[pair_index(n, i, j)] *= a[i] * a[j];
      return r;
    }
  }
  mismatch();
}

std::optional<Gamma0Element> alpha_unapply(const MonomorphismSpec& spec, const Gamma0Element& x) {
  check(spec, x);
  switch (spec.family()) {
    case Family::FreeAbelian: {
      auto sol = rational_solve(spec.abelian().A, as_vec(x).v);
      if (!sol) return std::nullopt;
      IntVector r;
      for (const auto& q : *sol) {
        if (denominator(q) != 1) return std::nullopt;
        r.v.push_back(numerator(q));
      }
      return r;
    }
    case Family::Heisenberg: {
      const auto& h = spec.heis();
      const auto& p = as_heis(x);
      auto m = exact_div(p.m, h.a * h.b);
      auto l = exact_div(p.l, h.b);
      auto k = exact_div(p.k, h.a);
      if (!m || !l || !k) return std::nullopt;
      return HeisTriple{*m, *l, *k};
    }
    case Family::FreeNilpotent: {
      const auto& a = spec.nilpotent().exps;
      NilElement r = as_nil(x);
      const std::size_t n = a.size();
      for (std::size_t i = 0; i < n; ++i) {
        auto q = exact_div(r.t[i], a[i]);
        if (!q) return std::nullopt;
        r.t[i] = *q;
      }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
          auto& c = r.z[pair_index(n, i, j)];
          auto q = exact_div(c, a[i] * a[j]);
          if (!q) return std::nullopt;
          c = *q;
        }
      return r;
    }
  }
  mismatch();
}

std::optional<Gamma0Element> alpha_power(const MonomorphismSpec& spec, std::int64_t p, const Gamma0Element& x) {
  Gamma0Element r = x;
  check(spec, x);
  for (std::int64_t i = 0; i < p; ++i) r = alpha_apply(spec, r);
  for (std::int64_t i = 0; i > p; --i) {
    auto y = alpha_unapply(spec, r);
    if (!y) return std::nullopt;
    r = std::move(*y);
  }
  return r;
}

std::vector<std::pair<std::size_t, Integer>> generator_factors(const MonomorphismSpec& spec, const Gamma0Element& x) {
  check(spec, x);
  std::vector<std::pair<std::size_t, Integer>> out;
  const auto e = exponents(x);
  for (std::size_t i = 0; i < e.size(); ++i)
    if (e[i] != 0) out.emplace_back(i, e[i]);
  return out;
}

std::vector<std::pair<std::size_t, Integer>> alpha_of_generator(const MonomorphismSpec& spec, std::size_t g) {
  return generator_factors(spec, alpha_apply(spec, generator(spec, g)));
}

std::optional<LatticePoint> lattice_mul(const MonomorphismSpec& spec, const LatticePoint& p, const LatticePoint& q) {
  check(spec, p.gamma);
  check(spec, q.gamma);
  // u^j g u^j' g' = u^{j+j'} (u^{-j'} g u^{j'}) g' and u^{-j'} g u^{j'} = alpha^{-j'}(g).
  auto moved = alpha_power(spec, -q.j, p.gamma);
  if (!moved) return std::nullopt;
  return LatticePoint{p.j + q.j, gamma0_mul(spec, *moved, q.gamma)};
}

// ---------------------------------------------------------------- words

bool is_reduced(const MonomorphismSpec& spec, const GroupWord& w) {
  if (w.m < 0 || w.n < 0) return false;
  if (w.m == 0 || w.n == 0) return true;
  return !alpha_unapply(spec, w.gamma).has_value();
}

GroupWord reduce(const MonomorphismSpec& spec, GroupWord w) {
  check(spec, w.gamma);
  if (w.m < 0 || w.n < 0) throw InvalidInput("word exponents must be non-negative");
  while (w.m > 0 && w.n > 0) {
    auto y = alpha_unapply(spec, w.gamma);
    if (!y) break;
    w.gamma = std::move(*y);
    --w.m;
    --w.n;
  }
  return w;
}

GroupWord word_mul(const MonomorphismSpec& spec, const GroupWord& w, const GroupWord& w2) {
  check(spec, w.gamma);
  check(spec, w2.gamma);
  GroupWord r;
  if (w.n >= w2.m) {
    // u^n u^-m' g' = u^{n-m'} g' = alpha^{n-m'}(g') u^{n-m'}
    const auto moved = *alpha_power(spec, w.n - w2.m, w2.gamma);
    r = GroupWord{w.m, gamma0_mul(spec, w.gamma, moved), w.n - w2.m + w2.n};
  } else {
    const auto moved = *alpha_power(spec, w2.m - w.n, w.gamma);
    r = GroupWord{w.m + w2.m - w.n, gamma0_mul(spec, moved, w2.gamma), w2.n};
  }
  return reduce(spec, std::move(r));
}

GroupWord word_inv(const MonomorphismSpec& spec, const GroupWord& w) {
  return reduce(spec, GroupWord{w.n, gamma0_inv(spec, w.gamma), w.m});
}

GroupWord word_identity(const MonomorphismSpec& spec) { return GroupWord{0, identity(spec), 0}; }

GroupWord word_u(const MonomorphismSpec& spec, std::int64_t power) {
  if (power >= 0) return GroupWord{0, identity(spec), power};
  return GroupWord{-power, identity(spec), 0};
}

GroupWord word_gamma(const MonomorphismSpec& spec, const Gamma0Element& g) {
  check(spec, g);
  return GroupWord{0, g, 0};
}

GroupWord word_from_lattice(const MonomorphismSpec& spec, const LatticePoint& p) {
  check(spec, p.gamma);
  if (p.j >= 0) return reduce(spec, GroupWord{0, *alpha_power(spec, p.j, p.gamma), p.j});
  return reduce(spec, GroupWord{-p.j, p.gamma, 0});
}

std::optional<LatticePoint> lattice_from_word(const MonomorphismSpec& spec, const GroupWord& w) {
  // u^-m g u^n = u^{n-m} (u^{-n} g u^n) = u^{n-m} alpha^{-n}(g).
  auto g = alpha_power(spec, -w.n, w.gamma);
  if (!g) return std::nullopt;
  return LatticePoint{w.n - w.m, *g};
}

// ---------------------------------------------------------------- text

std::string to_string(const MonomorphismSpec& spec, const Gamma0Element& x) {
  check(spec, x);
  const auto names = spec.generator_names();
  const auto e = exponents(x);
  std::string s;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!s.empty()) s += ' ';
    s += names[i] + "^" + e[i].str();
  }
  return s.empty() ? "e" : s;
}

std::string to_string(const MonomorphismSpec& spec, const GroupWord& w) {
  std::string s;
  auto add = [&](const std::string& t) {
    if (!s.empty()) s += ' ';
    s += t;
  };
  if (w.m != 0) add("u^-" + std::to_string(w.m));
  if (!is_identity(w.gamma)) add(to_string(spec, w.gamma));
  if (w.n != 0) add("u^" + std::to_string(w.n));
  return s.empty() ? "e" : s;
}

std::string to_string(const MonomorphismSpec& spec, const LatticePoint& p) {
  return "(" + std::to_string(p.j) + ", " + to_string(spec, p.gamma) + ")";
}

GroupWord parse_word(const MonomorphismSpec& spec, const std::string& text) {
  const auto names = spec.generator_names();
  GroupWord w = word_identity(spec);
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    if (tok == "e") continue;
    std::string name = tok;
    Integer e = 1;
    if (auto pos = tok.find('^'); pos != std::string::npos) {
      name = tok.substr(0, pos);
      const std::string es = tok.substr(pos + 1);
      try {
        e = Integer(es);
      } catch (const std::exception&) {
        throw InvalidInput("bad exponent in word token '" + tok + "'");
      }
    }
    if (name == "u") {
      w = word_mul(spec, w, word_u(spec, static_cast<std::int64_t>(e)));
      continue;
    }
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw InvalidInput("unknown generator '" + name + "' in word '" + text + "'");
    const auto g = gamma0_pow(spec, generator(spec, static_cast<std::size_t>(it - names.begin())), e);
    w = word_mul(spec, w, word_gamma(spec, g));
  }
  return w;
}

// ---------------------------------------------------------------- window

Window::Window(MonomorphismSpec spec, std::int64_t j_min, std::int64_t j_max, std::int64_t radius)
    : spec_(std::move(spec)), j_min_(j_min), j_max_(j_max), radius_(radius) {
  if (j_min > 0 || j_max < 0) throw InvalidInput("window must satisfy j_min <= 0 <= j_max");
  if (radius < 0) throw InvalidInput("window radius must be >= 0");
  const std::size_t L = spec_->exponent_length();
  const std::int64_t side = 2 * radius + 1;
  std::size_t count = 1;
  for (std::size_t i = 0; i < L; ++i) {
    count *= static_cast<std::size_t>(side);
    if (count > (std::size_t{1} << 24)) throw InvalidInput("window too large");
  }
  gammas_.reserve(count);
  std::vector<std::int64_t> digits(L, -radius);
  for (std::size_t c = 0; c < count; ++c) {
    std::vector<Integer> e(digits.begin(), digits.end());
    gammas_.push_back(from_exponents(*spec_, e));
    for (std::size_t i = L; i-- > 0;) {
      if (++digits[i] <= radius) break;
      digits[i] = -radius;
    }
  }
}

LatticePoint Window::point(std::size_t idx) const { return LatticePoint{level(idx), gammas_[gamma_index(idx)]}; }

std::int64_t Window::level(std::size_t idx) const {
  return j_min_ + static_cast<std::int64_t>(idx / gammas_.size());
}

std::size_t Window::gamma_index_of(const Gamma0Element& g) const {
  if (!matches(*spec_, g)) return npos;
  const std::int64_t side = 2 * radius_ + 1;
  std::size_t idx = 0;
  for (const auto& e : exponents(g)) {
    if (e > radius_ || e < -radius_) return npos;
    idx = idx * static_cast<std::size_t>(side) + static_cast<std::size_t>(static_cast<std::int64_t>(e) + radius_);
  }
  return idx;
}

std::size_t Window::index_of(std::int64_t j, const Gamma0Element& g) const {
  return index_of(j, gamma_index_of(g));
}

std::size_t Window::index_of(std::int64_t j, std::size_t gamma_idx) const {
  if (gamma_idx == npos || j < j_min_ || j > j_max_) return npos;
  return static_cast<std::size_t>(j - j_min_) * gammas_.size() + gamma_idx;
}

Window enumerate_window(const MonomorphismSpec& spec, std::int64_t j_min, std::int64_t j_max, std::int64_t radius) {
  return Window(spec, j_min, j_max, radius);
}

// ---------------------------------------------------------------- exact linear algebra

namespace {

// Fraction-free elimination of the augmented matrix M (n rows). Returns false
// if A is singular. sign tracks row swaps.
bool bareiss(std::vector<std::vector<Integer>>& M, std::size_t n, int& sign) {
  sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && M[p][k] == 0) ++p;
    if (p == n) return false;
    if (p != k) {
      std::swap(M[p], M[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < M[i].size(); ++j) M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) / prev;
      M[i][k] = 0;
    }
    prev = M[k][k];
  }
  return true;
}

std::vector<Rational> back_substitute(const std::vector<std::vector<Integer>>& M, std::size_t n, std::size_t col) {
  std::vector<Rational> y(n);
  for (std::size_t i = n; i-- > 0;) {
    Rational s = Rational(M[i][col]);
    for (std::size_t j = i + 1; j < n; ++j) s -= Rational(M[i][j]) * y[j];
    y[i] = s / Rational(M[i][i]);
  }
  return y;
}

}  // namespace

Integer determinant(const IntMatrix& A) {
  const std::size_t n = A.size();
  if (n == 0) return 1;
  auto M = A;
  int sign = 1;
  if (!bareiss(M, n, sign)) return 0;
  return sign * M[n - 1][n - 1];
}

std::optional<std::vector<Rational>> rational_solve(const IntMatrix& A, const std::vector<Integer>& x) {
  const std::size_t n = A.size();
  if (x.size() != n) throw InvalidInput("dimension mismatch in rational_solve");
  auto M = A;
  for (std::size_t i = 0; i < n; ++i) M[i].push_back(x[i]);
  int sign = 1;
  if (!bareiss(M, n, sign)) return std::nullopt;
  return back_substitute(M, n, n);
}

std::vector<std::vector<Rational>> rational_inverse(const IntMatrix& A) {
  const std::size_t n = A.size();
  auto M = A;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) M[i].push_back(i == j ? 1 : 0);
  int sign = 1;
  if (!bareiss(M, n, sign)) throw InvalidInput("matrix is singular");
  std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n));
  for (std::size_t c = 0; c < n; ++c) {
    auto col = back_substitute(M, n, n + c);
    for (std::size_t i = 0; i < n; ++i) inv[i][c] = col[i];
  }
  return inv;
}

}  // namespace dilatekit::group
