#include <gtest/gtest.h>

#include "dilatekit/errors.hpp"
#include "dilatekit/group.hpp"
#include "group_properties.hpp"

using namespace dilatekit;
using namespace dilatekit::group;

TEST(GroupProperties, ThousandRandomCasesHaveNoFailures) {
  const auto tally = fixtures::run_group_properties(1000, 20240611);
  EXPECT_EQ(tally.cases, 1000u);
  for (const auto& [name, count] : tally.failures) EXPECT_EQ(count, 0u) << name;
}

TEST(Group, BaumslagSolitarIdentity) {
  const auto spec = MonomorphismSpec::bs12();
  EXPECT_EQ(parse_word(spec, "u^-1 t1^2 u"), parse_word(spec, "t1"));
  EXPECT_EQ(parse_word(spec, "u t1 u^-1"), parse_word(spec, "t1^2"));
}

TEST(Group, AlphaOnBs12DoublesTranslations) {
  const auto spec = MonomorphismSpec::bs12();
  const auto t3 = from_exponents(spec, {Integer(3)});
  EXPECT_EQ(alpha_apply(spec, t3), from_exponents(spec, {Integer(6)}));
  EXPECT_EQ(alpha_unapply(spec, t3), std::nullopt);
  EXPECT_EQ(alpha_power(spec, -1, from_exponents(spec, {Integer(6)})), t3);
}

TEST(Group, HeisenbergProductIsNonCommutative) {
  const auto spec = MonomorphismSpec::heisenberg(Integer(2), Integer(2));
  const auto t2 = generator(spec, 1), t3 = generator(spec, 2);
  // t3 t2 = t1 t2 t3.
  const auto lhs = gamma0_mul(spec, t3, t2);
  const auto rhs = gamma0_mul(spec, generator(spec, 0), gamma0_mul(spec, t2, t3));
  EXPECT_EQ(lhs, rhs);
  EXPECT_NE(gamma0_mul(spec, t2, t3), lhs);
}

TEST(Group, LatticeChartRoundTrip) {
  const auto spec = MonomorphismSpec::heisenberg(Integer(2), Integer(2));
  const LatticePoint p{-2, from_exponents(spec, {Integer(1), Integer(-3), Integer(2)})};
  const auto w = word_from_lattice(spec, p);
  EXPECT_TRUE(is_reduced(spec, w));
  EXPECT_EQ(lattice_from_word(spec, w), p);
  EXPECT_EQ(lattice_from_word(spec, word_mul(spec, word_gamma(spec, generator(spec, 1)), word_u(spec, 1))), std::nullopt);
}

TEST(Group, LatticeProductFollowsAlpha) {
  const auto spec = MonomorphismSpec::bs12();
  const auto t = [&](int k) { return from_exponents(spec, {Integer(k)}); };
  // u^2 t = (2, t); t^4 u^2 = u^2 t; t u^2 leaves the pseudo-lattice.
  EXPECT_EQ(lattice_mul(spec, {2, identity(spec)}, {0, t(1)}), (LatticePoint{2, t(1)}));
  EXPECT_EQ(lattice_mul(spec, {0, t(4)}, {2, identity(spec)}), (LatticePoint{2, t(1)}));
  EXPECT_EQ(lattice_mul(spec, {0, t(1)}, {2, identity(spec)}), std::nullopt);
}

TEST(Group, WindowIndexing) {
  const auto w = enumerate_window(MonomorphismSpec::bs12(), -1, 1, 3);
  EXPECT_EQ(w.levels(), 3u);
  EXPECT_EQ(w.gammas_per_level(), 7u);
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_EQ(w.index_of(w.point(i)), i);
  EXPECT_EQ(w.index_of(5, identity(w.spec())), Window::npos);
}

TEST(Group, RejectsSingularMatrixAndUnknownTokens) {
  EXPECT_THROW(MonomorphismSpec::free_abelian({{Integer(1), Integer(2)}, {Integer(2), Integer(4)}}), InvalidInput);
  EXPECT_THROW(parse_word(MonomorphismSpec::bs12(), "t9"), InvalidInput);
}
