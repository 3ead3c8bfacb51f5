#include <filesystem>
#include <random>

#include <gtest/gtest.h>

#include "dilation/detail.hpp"
#include "dilatekit/commands.hpp"
#include "dilatekit/dilation.hpp"
#include "dilatekit/errors.hpp"
#include "dilatekit/frame.hpp"
#include "dilatekit/report.hpp"

using namespace dilatekit;
using namespace dilatekit::dilation;
using group::Integer;
using group::MonomorphismSpec;

namespace {

frame::MSFDyadic msf(const char* a, const char* b) {
  return {frame::IntervalSet::symmetric(frame::parse_rational(a), frame::parse_rational(b))};
}

// Explicit system with every vector zero: G = 0, K = I.
frame::ExplicitVectors zero_system(const group::Window& w) {
  frame::ExplicitVectors ev;
  ev.d = 1;
  for (std::size_t i = 0; i < w.size(); ++i) ev.vecs.push_back({w.point(i), CVector::Zero(1)});
  return ev;
}

struct Pipeline {
  frame::GramMatrix gram;
  KolmogorovModel km;
  SubspaceChain chain;
  ShiftOperator D;
  TranslationZero T0;
  DilationModel model;
};

Pipeline run(const frame::FrameSystemSpec& f, const group::Window& w, double rank_tol = 1e-14) {
  Pipeline p;
  p.gram = frame::gram_matrix(f, w);
  p.km = kolmogorov_factorize(complement_kernel(p.gram), rank_tol, 1e-10);
  if (p.km.rank == 0) {
    p.model = trivial_model(p.km);
    return p;
  }
  p.chain = subspace_chain(p.km);
  p.D = build_shift(p.km);
  p.T0 = build_T0(p.km, p.chain);
  p.model = build_tau(p.km, p.chain, p.D, p.T0);
  return p;
}

}  // namespace

TEST(ComplementKernel, PsdForRandomContractions) {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto w = group::enumerate_window(MonomorphismSpec::bs12(), 0, 1, 5);
  const Eigen::Index n = Eigen::Index(w.size());
  for (int trial = 0; trial < 20; ++trial) {
    CMatrix Z(n, n);
    for (Eigen::Index i = 0; i < Z.size(); ++i) Z(i) = cd(g(rng), g(rng));
    const CMatrix Q = Eigen::HouseholderQR<CMatrix>(Z).householderQ();
    Eigen::VectorXd lam(n);
    for (Eigen::Index i = 0; i < n; ++i) lam(i) = u(rng);
    const CMatrix G = Q * lam.cast<cd>().asDiagonal() * Q.adjoint();
    const frame::GramMatrix gm{w, G};
    EXPECT_GE(psd_check(complement_kernel(gm)), -1e-12);
  }
}

TEST(Kolmogorov, ZeroKernelHasRankZero) {
  const auto w = group::enumerate_window(MonomorphismSpec::bs12(), -2, 2, 8);
  const auto p = run(msf("1/2", "1"), w);
  EXPECT_EQ(p.km.rank, 0u);
  EXPECT_EQ(p.model.eta.size(), 0);
  const auto rep = assemble_dilation(p.gram, p.model, 1, 2);
  EXPECT_EQ(rep.dilated_gram, 0.0);
}

TEST(Kolmogorov, IdentityKernelGivesOrthonormalVectors) {
  const auto w = group::enumerate_window(MonomorphismSpec::bs12(), -1, 1, 3);
  const auto gram = frame::gram_matrix(zero_system(w), w);
  const auto km = kolmogorov_factorize(complement_kernel(gram), 1e-10, 1e-10);
  EXPECT_EQ(km.rank, w.size());
  EXPECT_LE((km.V.adjoint() * km.V - CMatrix::Identity(km.V.cols(), km.V.cols())).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE(km.residual, 1e-12);
}

TEST(Kolmogorov, GaugeIsDeterministic) {
  const auto w = group::enumerate_window(MonomorphismSpec::bs12(), -1, 1, 8);
  const auto K = complement_kernel(frame::gram_matrix(msf("1/8", "1/4"), w));
  const auto a = kolmogorov_factorize(K, 1e-12, 1e-10), b = kolmogorov_factorize(K, 1e-12, 1e-10);
  EXPECT_TRUE(a.V == b.V);
  // Near-ties in magnitude may pick any of the largest entries.
  for (Eigen::Index i = 0; i < a.V.rows(); ++i) {
    const double top = a.V.row(i).cwiseAbs().maxCoeff();
    bool found = false;
    for (Eigen::Index c = 0; c < a.V.cols() && !found; ++c) {
      const cd v = a.V(i, c);
      found = std::abs(v) >= top * (1 - 1e-12) && v.imag() == 0.0 && v.real() > 0.0;
    }
    EXPECT_TRUE(found) << "row " << i;
  }
}

TEST(Kolmogorov, IndefiniteKernelThrows) {
  const auto w = group::enumerate_window(MonomorphismSpec::bs12(), 0, 0, 1);
  CMatrix G = CMatrix::Identity(3, 3) * 2.0;
  EXPECT_THROW(kolmogorov_factorize(complement_kernel({w, G}), 1e-10, 1e-10), IndefiniteKernel);
}

TEST(KRelations, HoldExactlyForMsfAndFailForRandomVectors) {
  const auto w = group::enumerate_window(MonomorphismSpec::bs12(), -2, 2, 8);
  const auto ok = check_k_relations(complement_kernel(frame::gram_matrix(msf("1/8", "1/4"), w)), w.spec());
  EXPECT_EQ(ok.shift_residual, 0.0);
  EXPECT_EQ(ok.translation_residual, 0.0);
  EXPECT_GT(ok.checkable_fraction(), 0.0);

  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  frame::ExplicitVectors ev;
  ev.d = 3;
  for (std::size_t i = 0; i < w.size(); ++i) {
    CVector v(3);
    for (auto& z : v) z = cd(g(rng), g(rng));
    ev.vecs.push_back({w.point(i), v});
  }
  const auto bad = check_k_relations(complement_kernel(frame::gram_matrix(ev, w)), w.spec());
  EXPECT_GT(bad.shift_residual, 1e-3);
}

TEST(Shift, IdentityKernelTwoLevelSingleton) {
  const auto w = group::enumerate_window(MonomorphismSpec::bs12(), 0, 1, 0);
  const auto p = run(zero_system(w), w);
  ASSERT_EQ(p.km.rank, 2u);
  EXPECT_EQ(p.chain.dim(0), 1u);
  EXPECT_EQ(p.chain.dim(1), 1u);
  const auto x0 = Eigen::Index(w.index_of(0, std::size_t(0))), x1 = Eigen::Index(w.index_of(1, std::size_t(0)));
  EXPECT_LE((p.D.D * p.km.V.col(x0) - p.km.V.col(x1)).norm(), 1e-14);
  EXPECT_LE(unitarity_error(p.D.D), 1e-14);
}

TEST(Tau, IdentityKernelRelationsOnDefinedBlocks) {
  const auto w = group::enumerate_window(MonomorphismSpec::bs12(), -1, 2, 2);
  const auto p = run(zero_system(w), w);
  const auto rel = report::relation_residuals(p.model);
  EXPECT_LE(rel.max_defined(), 1e-8);
  EXPECT_LE(p.D.constraint_residual, 1e-12);
  for (const auto& [g, r] : p.T0.constraint_residual) EXPECT_LE(r, 1e-12) << g;
}

TEST(Tau, SubShannonSmallWindow) {
  const auto w = group::enumerate_window(MonomorphismSpec::bs12(), -2, 2, 16);
  const auto p = run(msf("1/8", "1/4"), w);
  ASSERT_GT(p.km.rank, 0u);
  EXPECT_LE(p.km.residual, 1e-10);
  EXPECT_LE(p.chain.orthogonality_error(), 1e-10);
  EXPECT_LE(p.D.constraint_residual, 1e-8);
  EXPECT_LE(p.D.unitarity, 1e-10);
  for (const auto& [g, r] : p.T0.constraint_residual) EXPECT_LE(r, 1e-8) << g;
  for (const auto& [g, T] : p.model.T) EXPECT_LE(unitarity_error(T), 1e-10) << g;
  const auto rep = assemble_dilation(p.gram, p.model, 1, 2);
  EXPECT_GT(rep.core_points, 0u);
  EXPECT_LE(rep.reconstruction, 1e-6);
  EXPECT_LE(rep.dilated_gram, 1e-6);
  EXPECT_EQ(rep.projection_identity, 0.0);
  EXPECT_LE(report::relation_residuals(p.model).max_defined(), 1e-6);
}

TEST(Tau, InvarianceOnSampledPairs) {
  const auto w = group::enumerate_window(MonomorphismSpec::bs12(), -2, 2, 16);
  const auto p = run(msf("1/8", "1/4"), w);
  const auto& spec = w.spec();
  std::vector<group::GroupWord> words = {group::parse_word(spec, "u"), group::parse_word(spec, "t1")};
  std::vector<std::pair<group::LatticePoint, group::LatticePoint>> pairs;
  for (long k = -2; k <= 2; ++k)
    pairs.push_back({{0, group::identity(spec)}, {-1, group::from_exponents(spec, {Integer(k)})}});
  const auto inv = report::invariance_sample(p.model, words, pairs);
  EXPECT_GT(inv.sampled, 0u);
  EXPECT_LE(inv.residual, 1e-8);
}

TEST(Procrustes, CompletesRankDeficientMapsToUnitaries) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  CMatrix S(6, 2);
  for (auto& z : S.reshaped()) z = cd(g(rng), g(rng));
  const CMatrix Q = Eigen::HouseholderQR<CMatrix>(CMatrix::Random(6, 6)).householderQ();
  const CMatrix T = Q * S;
  const auto pr = detail::procrustes(CMatrix(T * S.adjoint()), detail::contiguous_groups({6}));
  EXPECT_EQ(pr.rank, 2u);
  EXPECT_LE(unitarity_error(pr.U), 1e-13);
  EXPECT_LE((pr.U * S - T).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ModelFiles, SaveLoadRoundTrip) {
  const auto w = group::enumerate_window(MonomorphismSpec::bs12(), -1, 1, 4);
  const auto p = run(msf("1/8", "1/4"), w);
  const auto dir = std::filesystem::temp_directory_path() / "dilatekit_model_roundtrip";
  std::filesystem::remove_all(dir);
  cli::save_model(p.model, dir);
  const auto back = cli::load_model(w, dir);
  EXPECT_TRUE(back.V == p.model.V);
  EXPECT_TRUE(back.D == p.model.D);
  EXPECT_TRUE(back.eta == p.model.eta);
  for (const auto& [g, T] : p.model.T) EXPECT_TRUE(back.T.at(g) == T) << g;
  std::filesystem::remove_all(dir);
}
