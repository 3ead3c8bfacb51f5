#pragma once

// Randomized property suite for the group layer, shared by the unit tests
// and the acceptance binary.

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "dilatekit/group.hpp"

namespace dilatekit::fixtures {

struct PropertyTally {
  std::size_t cases = 0;
  std::map<std::string, std::size_t> failures;  // property -> count
  std::size_t total_failures() const {
    std::size_t n = 0;
    for (const auto& [_, c] : failures) n += c;
    return n;
  }
};

inline std::vector<group::MonomorphismSpec> property_families() {
  using group::Integer;
  using group::MonomorphismSpec;
  return {MonomorphismSpec::bs12(),
          MonomorphismSpec::free_abelian({{Integer(2), Integer(1)}, {Integer(0), Integer(2)}}),
          MonomorphismSpec::free_abelian({{Integer(3), Integer(0)}, {Integer(1), Integer(-2)}}),
          MonomorphismSpec::heisenberg(Integer(2), Integer(2)),
          MonomorphismSpec::heisenberg(Integer(1), Integer(3)),
          MonomorphismSpec::free_nilpotent({Integer(2), Integer(3), Integer(1)})};
}

inline group::Gamma0Element random_element(const group::MonomorphismSpec& spec, std::mt19937_64& rng, int bound) {
  std::uniform_int_distribution<int> e(-bound, bound);
  std::vector<group::Integer> ex(spec.exponent_length());
  for (auto& v : ex) v = e(rng);
  return group::from_exponents(spec, ex);
}

inline group::GroupWord random_word(const group::MonomorphismSpec& spec, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> p(0, 3);
  group::GroupWord w{p(rng), random_element(spec, rng, 4), p(rng)};
  return group::reduce(spec, w);
}

inline PropertyTally run_group_properties(std::size_t cases, std::uint64_t seed) {
  using namespace group;
  PropertyTally t;
  std::mt19937_64 rng(seed);
  const auto families = property_families();
  auto check = [&](bool ok, const std::string& name) {
    auto& slot = t.failures[name];
    if (!ok) ++slot;
  };
  for (std::size_t c = 0; c < cases; ++c) {
    const auto& spec = families[c % families.size()];
    const auto x = random_element(spec, rng, 5), y = random_element(spec, rng, 5), z = random_element(spec, rng, 5);
    const auto e = identity(spec);

    check(gamma0_mul(spec, gamma0_mul(spec, x, y), z) == gamma0_mul(spec, x, gamma0_mul(spec, y, z)), "associativity");
    check(gamma0_mul(spec, x, e) == x && gamma0_mul(spec, e, x) == x, "identity");
    check(is_identity(gamma0_mul(spec, x, gamma0_inv(spec, x))) && is_identity(gamma0_mul(spec, gamma0_inv(spec, x), x)),
          "inverse");

    const auto ax = alpha_apply(spec, x), ay = alpha_apply(spec, y);
    check(alpha_apply(spec, gamma0_mul(spec, x, y)) == gamma0_mul(spec, ax, ay), "alpha_homomorphism");
    const auto back = alpha_unapply(spec, ax);
    check(back.has_value() && *back == x, "alpha_injective");
    check((x == y) == (ax == ay), "alpha_distinguishes");

    const auto w1 = random_word(spec, rng), w2 = random_word(spec, rng), w3 = random_word(spec, rng);
    const auto left = word_mul(spec, word_mul(spec, w1, w2), w3);
    const auto right = word_mul(spec, w1, word_mul(spec, w2, w3));
    check(left == right, "word_associativity");
    check(is_reduced(spec, left), "word_reduced");
    check(word_mul(spec, w1, word_inv(spec, w1)) == word_identity(spec), "word_inverse");

    // u^-1 alpha(g) u = g for every g in Gamma0.
    const auto conj = word_mul(spec, word_mul(spec, word_u(spec, -1), word_gamma(spec, ax)), word_u(spec, 1));
    check(conj == word_gamma(spec, x), "hnn_relation");
    if (spec.family() == Family::FreeAbelian && spec.rank() == 1)
      check(parse_word(spec, "u^-1 t1^2 u") == parse_word(spec, "t1"), "bs12_identity");
    ++t.cases;
  }
  return t;
}

}  // namespace dilatekit::fixtures
