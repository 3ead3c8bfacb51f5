#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "dilatekit/errors.hpp"
#include "dilatekit/roots.hpp"
#include "frozen_values.hpp"

using namespace dilatekit;
using namespace dilatekit::roots;
using group::Integer;

namespace {

CMatrix random_unitary(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix Z(d, d);
  for (Eigen::Index i = 0; i < Z.size(); ++i) Z(i) = cd(g(rng), g(rng));
  Eigen::HouseholderQR<CMatrix> qr(Z);
  CMatrix Q = qr.householderQ();
  // Fix column phases so the distribution does not depend on the QR sign convention.
  const CMatrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < d; ++i) Q.col(i) *= std::abs(R(i, i)) / R(i, i);
  return Q;
}

CVector random_phases(Eigen::Index d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  CVector z(d);
  for (Eigen::Index i = 0; i < d; ++i) z(i) = std::polar(1.0, u(rng));
  return z;
}

}  // namespace

TEST(PrincipalRoot, RoundTripOnRandomUnitaries) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> dim(1, 64), pw(2, 8);
  double worst = 0, worst_branch = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = dim(rng), a = pw(rng);
    const CMatrix U = random_unitary(d, rng);
    const CMatrix S = principal_root(U, a);
    worst = std::max(worst, induced_one_norm(unitary_power(S, Integer(a)) - U));
    Eigen::ComplexEigenSolver<CMatrix> es(S);
    for (Eigen::Index i = 0; i < d; ++i) {
      const double arg = std::arg(es.eigenvalues()(i));
      worst_branch = std::max(worst_branch, std::abs(arg) - std::numbers::pi / a);
    }
  }
  EXPECT_LE(worst, 1e-10);
  EXPECT_LE(worst_branch, 1e-12);
}

TEST(PrincipalRoot, MinusOneGoesToPlusI) {
  CMatrix U = CMatrix::Identity(2, 2) * -1.0;
  const CMatrix S = principal_root(U, 2);
  EXPECT_LE((S - CMatrix::Identity(2, 2) * cd(0, 1)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PrincipalRoot, BranchOffsetSelectsOtherRoot) {
  CMatrix U = CMatrix::Identity(1, 1);
  const std::int64_t off[] = {1};
  const CMatrix S = principal_root(U, 2, off);
  EXPECT_NEAR(std::abs(S(0, 0) - cd(-1, 0)), 0.0, 1e-15);
}

TEST(PrincipalRoot, RejectsNonUnitary) {
  CMatrix U = CMatrix::Identity(3, 3) * 2.0;
  EXPECT_THROW(principal_root(U, 2), InvalidInput);
}

TEST(JointDiagonalize, CommutingPairSharesBasis) {
  std::mt19937_64 rng(3);
  const CMatrix Q = random_unitary(12, rng);
  CVector z1 = random_phases(12, rng), z2 = random_phases(12, rng);
  z1(1) = z1(0);  // a degenerate eigenvalue of the first matrix
  const CMatrix us[] = {Q * z1.asDiagonal() * Q.adjoint(), Q * z2.asDiagonal() * Q.adjoint()};
  const auto jd = joint_diagonalize(us, 5);
  EXPECT_LE(jd.offdiag_residual, 1e-10);
  EXPECT_LE(unitarity_error(jd.basis), 1e-12);
}

TEST(JointDiagonalize, NonCommutingInputThrows) {
  const auto h = finite_heisenberg_rep(4);
  const CMatrix us[] = {h.T, h.M};
  EXPECT_THROW(joint_diagonalize(us, 0), CommutationViolation);
}

TEST(AbelianRoot, UpperTriangularTwoByTwo) {
  std::mt19937_64 rng(17);
  const group::IntMatrix A = {{Integer(2), Integer(1)}, {Integer(0), Integer(2)}};
  const auto spec = group::MonomorphismSpec::free_abelian(A);
  for (int trial = 0; trial < 5; ++trial) {
    const CMatrix Q = random_unitary(16, rng);
    RepresentationTable rho;
    rho.gens["t1"] = Q * random_phases(16, rng).asDiagonal() * Q.adjoint();
    rho.gens["t2"] = Q * random_phases(16, rng).asDiagonal() * Q.adjoint();
    const auto T = abelian_alpha_root(rho, A, 9);
    for (std::size_t g = 0; g < 2; ++g) {
      CMatrix img = CMatrix::Identity(16, 16);
      for (const auto& [i, e] : group::alpha_of_generator(spec, g)) img = img * unitary_power(T.gens.at(spec.generator_names()[i]), e);
      const std::string name = spec.generator_names()[g];
      EXPECT_LE(induced_one_norm(img - rho.gens.at(name)), 1e-8) << name;
    }
    EXPECT_LE(induced_one_norm(T.gens.at("t1") * T.gens.at("t2") - T.gens.at("t2") * T.gens.at("t1")), 1e-10);
  }
}

TEST(HeisenbergRoot, TrivialExponentsGiveExactLemma) {
  for (int N : {2, 3, 8, 16}) {
    const auto h = finite_heisenberg_rep(N);
    const auto r = heisenberg_alpha_root(h.T, h.M, h.C, 1, 1);
    EXPECT_LE(r.r1, 1e-12) << N;
    EXPECT_LE(r.r2, 1e-12) << N;
    EXPECT_LE(r.r3, 1e-12) << N;
  }
}

TEST(HeisenbergRoot, FrozenResidualsForFiniteRepresentation) {
  for (const auto& ref : fixtures::kHeisenbergLemmaA2B2) {
    const auto h = finite_heisenberg_rep(ref.N);
    const auto r = heisenberg_alpha_root(h.T, h.M, h.C, 2, 2);
    EXPECT_NEAR(r.r1, ref.r1, fixtures::kLemmaTol) << ref.N;
    EXPECT_NEAR(r.r2, ref.r2, fixtures::kLemmaTol) << ref.N;
    EXPECT_NEAR(r.r3, ref.r3, fixtures::kLemmaTol) << ref.N;
  }
}

TEST(HeisenbergRoot, RejectsBrokenRelation) {
  const auto h = finite_heisenberg_rep(4);
  EXPECT_THROW(heisenberg_alpha_root(h.T, h.M, CMatrix::Identity(4, 4), 2, 2), RelationViolation);
}

TEST(FiniteHeisenberg, CommutationRelation) {
  const auto h = finite_heisenberg_rep(8);
  EXPECT_LE(induced_one_norm(h.T * h.M - h.C * h.M * h.T), 1e-14);
  EXPECT_LE(unitarity_error(h.T), 1e-15);
  EXPECT_LE(unitarity_error(h.M), 1e-15);
}

TEST(NilpotentRoot, UnitExponentsReproduceInput) {
  const auto h = finite_heisenberg_rep(6);
  RepresentationTable rho;
  rho.family = group::Family::FreeNilpotent;
  rho.gens["t1"] = h.T;
  rho.gens["t2"] = h.M;
  rho.gens["z1_2"] = h.T * h.M * h.T.adjoint() * h.M.adjoint();
  const auto out = fn_alpha_root(rho, {Integer(1), Integer(1)});
  ASSERT_FALSE(out.relation_residuals.empty());
  for (const auto& [name, r] : out.relation_residuals) EXPECT_LE(r, 1e-12) << name;
}
