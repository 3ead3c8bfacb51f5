#include "dilatekit/roots.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "dilatekit/errors.hpp"

namespace dilatekit::roots {

using std::numbers::pi;

void require_unitary(const CMatrix& U, double tol, const std::string& what) {
  if (U.rows() != U.cols()) throw InvalidInput(what + " is not square");
  const double err = unitarity_error(U);
  if (!(err <= tol)) throw InvalidInput(what + " is not unitary (||U*U - I|| = " + std::to_string(err) + ")");
}

std::vector<double> clustered_angles(std::span<const cd> z) {
  const std::size_t n = z.size();
  std::vector<double> raw(n);
  for (std::size_t i = 0; i < n; ++i) {
    raw[i] = std::arg(z[i]);
    if (raw[i] <= -pi) raw[i] = pi;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return raw[a] < raw[b]; });

  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = order[k];
    if (!clusters.empty() && raw[i] - raw[clusters.back().back()] <= kClusterTol)
      clusters.back().push_back(i);
    else
      clusters.push_back({i});
  }
  // Wrap-around: the first and last clusters touch across -pi / pi.
  if (clusters.size() > 1) {
    const double gap = raw[clusters.front().front()] + 2 * pi - raw[clusters.back().back()];
    if (gap <= kClusterTol) {
      clusters.back().insert(clusters.back().end(), clusters.front().begin(), clusters.front().end());
      clusters.erase(clusters.begin());
    }
  }

  std::vector<double> out(n);
  for (const auto& c : clusters) {
    cd mean = 0.0;
    for (auto i : c) mean += z[i] / std::abs(z[i]);
    double rep = std::arg(mean);
    if (rep < -pi + kClusterTol) rep += 2 * pi;  // keep -1 on the +pi side
    for (auto i : c) out[i] = rep + std::remainder(raw[i] - rep, 2 * pi);
  }
  return out;
}

// ---------------------------------------------------------------- joint diagonalization

namespace {

double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; }

std::vector<CMatrix> hermitian_parts(std::span<const CMatrix> us) {
  std::vector<CMatrix> hs;
  for (const auto& U : us) {
    hs.push_back((U + U.adjoint()) * 0.5);
    hs.push_back((U - U.adjoint()) * cd(0.0, -0.5));
  }
  return hs;
}

bool all_scalar(const std::vector<CMatrix>& hs, double tol) {
  for (const auto& H : hs) {
    const cd mean = H.trace() / static_cast<double>(H.rows());
    CMatrix D = H;
    D.diagonal().array() -= mean;
    if (max_abs(D) > tol) return false;
  }
  return true;
}

std::vector<CMatrix> compress(const std::vector<CMatrix>& hs, const CMatrix& Q) {
  std::vector<CMatrix> out;
  for (const auto& H : hs) {
    CMatrix S = Q.adjoint() * H * Q;
    out.push_back((S + S.adjoint()) * 0.5);
  }
  return out;
}

// Orthonormal Q diagonalizing every H in hs (assumed to commute).
CMatrix diagonalize_family(const std::vector<CMatrix>& hs, std::mt19937_64& rng, int depth) {
  const Eigen::Index d = hs.front().rows();
  if (d == 1 || depth > 12 || all_scalar(hs, 1e-12)) return CMatrix::Identity(d, d);
  CMatrix H = CMatrix::Zero(d, d);
  for (const auto& h : hs) H += uniform(rng) * h;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(H);
  if (es.info() != Eigen::Success) throw NumericalFailure("joint_diagonalize: eigensolver failed");
  CMatrix Q = es.eigenvectors();
  const RVector& lam = es.eigenvalues();
  const double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i <= d; ++i) {
    if (i < d && lam(i) - lam(i - 1) <= kClusterTol * scale) continue;
    const Eigen::Index len = i - start;
    if (len > 1 && len < d) {
      const CMatrix Qc = Q.middleCols(start, len);
      Q.middleCols(start, len) = Qc * diagonalize_family(compress(hs, Qc), rng, depth + 1);
    } else if (len == d) {
      // Whole space degenerate for this draw; try another combination.
      Q = Q * diagonalize_family(compress(hs, Q), rng, depth + 1);
    }
    start = i;
  }
  return Q;
}

// First-order correction of a nearly joint eigenbasis. For every pair of
// columns, the member of the family with the widest eigenvalue gap fixes the
// rotation X_pq = D_pq / (D_qq - D_pp); pairs degenerate in every member are
// left alone. Columns are re-orthonormalized by the polar factor.
CMatrix refine_basis(std::span<const CMatrix> us, CMatrix Q) {
  const Eigen::Index d = Q.cols();
  for (int iter = 0; iter < 2; ++iter) {
    std::vector<CMatrix> D;
    for (const auto& U : us) D.push_back(Q.adjoint() * U * Q);
    CMatrix X = CMatrix::Zero(d, d);
    for (Eigen::Index q = 0; q < d; ++q)
      for (Eigen::Index p = 0; p < d; ++p) {
        if (p == q) continue;
        std::size_t best = 0;
        double gap = -1;
        for (std::size_t i = 0; i < D.size(); ++i) {
          const double g = std::abs(D[i](q, q) - D[i](p, p));
          if (g > gap) {
            gap = g;
            best = i;
          }
        }
        if (gap > kClusterTol) X(p, q) = D[best](p, q) / (D[best](q, q) - D[best](p, p));
      }
    if (X.cwiseAbs().maxCoeff() == 0.0) break;
    const CMatrix Y = Q * (CMatrix::Identity(d, d) + X);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(Y.adjoint() * Y);
    Q = Y * (es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().adjoint());
  }
  return Q;
}

double offdiag(const CMatrix& D) {
  CMatrix O = D;
  O.diagonal().setZero();
  return max_abs(O);
}

}  // namespace

JointEigenbasis joint_diagonalize(std::span<const CMatrix> us, std::uint64_t seed, double commute_tol) {
  if (us.empty()) throw InvalidInput("joint_diagonalize: empty family");
  const Eigen::Index d = us.front().rows();
  for (std::size_t i = 0; i < us.size(); ++i) {
    if (us[i].rows() != d || us[i].cols() != d) throw InvalidInput("joint_diagonalize: size mismatch");
    for (std::size_t j = i + 1; j < us.size(); ++j) {
      const double c = induced_one_norm(us[i] * us[j] - us[j] * us[i]);
      if (!(c <= commute_tol))
        throw CommutationViolation("joint_diagonalize: matrices " + std::to_string(i) + " and " + std::to_string(j) +
                                   " do not commute (" + std::to_string(c) + ")");
    }
  }
  JointEigenbasis out;
  out.seed = seed;
  if (d == 0) {
    out.basis = CMatrix(0, 0);
    out.eigenvalues.assign(us.size(), CVector(0));
    return out;
  }
  std::mt19937_64 rng(seed);
  const auto hs = hermitian_parts(us);
  CMatrix Q = diagonalize_family(hs, rng, 0);

  // Repair pass: columns still coupled by a visible off-diagonal entry are
  // grouped and re-diagonalized together.
  constexpr double kCouple = 1e-10;
  for (int pass = 0; pass < 3; ++pass) {
    std::vector<Eigen::Index> parent(d);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](Eigen::Index x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    bool coupled = false;
    for (const auto& U : us) {
      const CMatrix D = Q.adjoint() * U * Q;
      for (Eigen::Index p = 0; p < d; ++p)
        for (Eigen::Index q = p + 1; q < d; ++q)
          if (std::abs(D(p, q)) > kCouple || std::abs(D(q, p)) > kCouple) {
            parent[find(p)] = find(q);
            coupled = true;
          }
    }
    if (!coupled) break;
    std::map<Eigen::Index, std::vector<Eigen::Index>> groups;
    for (Eigen::Index p = 0; p < d; ++p) groups[find(p)].push_back(p);
    for (const auto& [root, cols] : groups) {
      if (cols.size() < 2) continue;
      CMatrix Qg(d, static_cast<Eigen::Index>(cols.size()));
      for (std::size_t c = 0; c < cols.size(); ++c) Qg.col(c) = Q.col(cols[c]);
      Eigen::HouseholderQR<CMatrix> qr(Qg);  // re-orthonormalize the group
      CMatrix Qo = qr.householderQ() * CMatrix::Identity(d, Qg.cols());
      Qo = Qo * diagonalize_family(compress(hs, Qo), rng, 0);
      for (std::size_t c = 0; c < cols.size(); ++c) Q.col(cols[c]) = Qo.col(c);
    }
  }

  Q = refine_basis(us, std::move(Q));

  out.basis = Q;
  for (const auto& U : us) {
    const CMatrix D = Q.adjoint() * U * Q;
    out.eigenvalues.push_back(D.diagonal());
    out.offdiag_residual = std::max(out.offdiag_residual, offdiag(D));
  }
  return out;
}

// ---------------------------------------------------------------- roots

CMatrix principal_root(const CMatrix& U, std::int64_t a, std::span<const std::int64_t> branch_offsets) {
  if (a < 1) throw InvalidInput("principal_root: a must be >= 1");
  require_unitary(U, kUnitaryTol, "principal_root input");
  if (a == 1 && branch_offsets.empty()) return U;
  const CMatrix us[] = {U};
  const auto jd = joint_diagonalize(us, 0);
  const CVector& z = jd.eigenvalues[0];
  if (!branch_offsets.empty() && branch_offsets.size() != static_cast<std::size_t>(z.size()))
    throw InvalidInput("principal_root: branch offset count differs from dimension");
  const auto theta = clustered_angles({z.data(), static_cast<std::size_t>(z.size())});
  CVector root(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double o = branch_offsets.empty() ? 0.0 : static_cast<double>(branch_offsets[i]);
    root(i) = std::polar(1.0, (theta[i] + 2 * pi * o) / static_cast<double>(a));
  }
  return jd.basis * root.asDiagonal() * jd.basis.adjoint();
}

std::map<std::string, double> family_relation_residuals(const group::MonomorphismSpec& spec,
                                                        const std::map<std::string, CMatrix>& gens) {
  std::map<std::string, double> r;
  const auto names = spec.generator_names();
  auto g = [&](const std::string& n) -> const CMatrix& {
    auto it = gens.find(n);
    if (it == gens.end()) throw InvalidInput("representation table lacks generator " + n);
    return it->second;
  };
  switch (spec.family()) {
    case group::Family::FreeAbelian:
      for (std::size_t i = 0; i < names.size(); ++i)
        for (std::size_t j = i + 1; j < names.size(); ++j)
          r["commute[" + names[i] + "," + names[j] + "]"] =
              induced_one_norm(g(names[i]) * g(names[j]) - g(names[j]) * g(names[i]));
      break;
    case group::Family::Heisenberg: {
      const CMatrix &C = g("t1"), &B = g("t2"), &A = g("t3");
      r["t3t2=t1t2t3"] = induced_one_norm(A * B - C * B * A);
      r["t1t3=t3t1"] = induced_one_norm(A * C - C * A);
      r["t1t2=t2t1"] = induced_one_norm(B * C - C * B);
      break;
    }
    case group::Family::FreeNilpotent: {
      const std::size_t n = spec.nilpotent().exps.size();
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
          const std::string ti = "t" + std::to_string(i + 1), tj = "t" + std::to_string(j + 1);
          const std::string z = "z" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
          r[ti + tj + "=" + z + tj + ti] = induced_one_norm(g(ti) * g(tj) - g(z) * g(tj) * g(ti));
          for (std::size_t k = 0; k < n; ++k) {
            const std::string tk = "t" + std::to_string(k + 1);
            r["central[" + z + "," + tk + "]"] = induced_one_norm(g(z) * g(tk) - g(tk) * g(z));
          }
        }
      break;
    }
  }
  return r;
}

RepresentationTable abelian_alpha_root(const RepresentationTable& rho, const group::IntMatrix& A, std::uint64_t seed) {
  const std::size_t n = A.size();
  if (group::determinant(A) == 0) throw InvalidInput("abelian_alpha_root: det(A) = 0");
  const auto B = group::rational_inverse(A);
  std::vector<CMatrix> us;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back("t" + std::to_string(i + 1));
    auto it = rho.gens.find(names.back());
    if (it == rho.gens.end()) throw InvalidInput("abelian_alpha_root: missing generator " + names.back());
    require_unitary(it->second, kUnitaryTol, names.back());
    us.push_back(it->second);
  }
  const auto jd = joint_diagonalize(us, seed);
  const Eigen::Index d = jd.basis.rows();
  std::vector<std::vector<double>> theta;
  for (const auto& z : jd.eigenvalues) theta.push_back(clustered_angles({z.data(), static_cast<std::size_t>(z.size())}));

  RepresentationTable out;
  out.family = group::Family::FreeAbelian;
  for (std::size_t j = 0; j < n; ++j) {
    CVector diag(d);
    for (Eigen::Index p = 0; p < d; ++p) {
      double phase = 0.0;
      for (std::size_t i = 0; i < n; ++i) phase += theta[i][p] * static_cast<double>(B[i][j]);
      diag(p) = std::polar(1.0, phase);
    }
    out.gens[names[j]] = jd.basis * diag.asDiagonal() * jd.basis.adjoint();
  }
  // T(alpha(t_j)) = prod_k T(t_k)^{a_kj}.
  for (std::size_t j = 0; j < n; ++j) {
    CMatrix P = CMatrix::Identity(d, d);
    for (std::size_t k = 0; k < n; ++k) P = P * unitary_power(out.gens[names[k]], A[k][j]);
    out.relation_residuals["alpha_root[" + names[j] + "]"] = induced_one_norm(P - us[j]);
  }
  out.relation_residuals["joint_offdiag"] = jd.offdiag_residual;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      out.relation_residuals["commute[" + names[i] + "," + names[j] + "]"] =
          induced_one_norm(out.gens[names[i]] * out.gens[names[j]] - out.gens[names[j]] * out.gens[names[i]]);
  return out;
}

HeisenbergRoot heisenberg_alpha_root(const CMatrix& A, const CMatrix& B, const CMatrix& C, std::int64_t a,
                                     std::int64_t b) {
  if (a < 1 || b < 1) throw InvalidInput("heisenberg_alpha_root: a, b must be >= 1");
  require_unitary(A, kUnitaryTol, "A");
  require_unitary(B, kUnitaryTol, "B");
  require_unitary(C, kUnitaryTol, "C");
  if (B.rows() != A.rows() || C.rows() != A.rows()) throw InvalidInput("heisenberg_alpha_root: size mismatch");
  const double rel[] = {induced_one_norm(A * B - C * B * A), induced_one_norm(A * C - C * A),
                        induced_one_norm(B * C - C * B)};
  for (double r : rel)
    if (!(r <= kRelationTol))
      throw RelationViolation("heisenberg_alpha_root: AB = CBA, AC = CA, BC = CB violated (" + std::to_string(r) + ")");
  HeisenbergRoot out;
  out.U = principal_root(A, a);
  out.V = principal_root(B, b);
  out.W = out.U * out.V * out.U.adjoint() * out.V.adjoint();
  out.r1 = induced_one_norm(unitary_power(out.W, group::Integer(a) * b) - C);
  out.r2 = induced_one_norm(out.U * out.W - out.W * out.U);
  out.r3 = induced_one_norm(out.V * out.W - out.W * out.V);
  return out;
}

RepresentationTable fn_alpha_root(const RepresentationTable& rho, const std::vector<group::Integer>& exps) {
  const auto spec = group::MonomorphismSpec::free_nilpotent(exps);
  for (const auto& name : spec.generator_names()) {
    auto it = rho.gens.find(name);
    if (it == rho.gens.end()) throw InvalidInput("fn_alpha_root: missing generator " + name);
    require_unitary(it->second, kUnitaryTol, name);
  }
  for (const auto& [name, r] : family_relation_residuals(spec, rho.gens))
    if (!(r <= kRelationTol)) throw RelationViolation("fn_alpha_root: relation " + name + " violated (" + std::to_string(r) + ")");

  const std::size_t n = exps.size();
  RepresentationTable out;
  out.family = group::Family::FreeNilpotent;
  std::vector<CMatrix> U(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::string tk = "t" + std::to_string(k + 1);
    U[k] = principal_root(rho.gens.at(tk), static_cast<std::int64_t>(exps[k]));
    out.gens[tk] = U[k];
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::string z = "z" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
      const CMatrix W = U[i] * U[j] * U[i].adjoint() * U[j].adjoint();
      out.gens[z] = W;
      out.relation_residuals["power[" + z + "]"] =
          induced_one_norm(unitary_power(W, exps[i] * exps[j]) - rho.gens.at(z));
      for (std::size_t k = 0; k < n; ++k)
        out.relation_residuals["central[" + z + ",t" + std::to_string(k + 1) + "]"] =
            induced_one_norm(W * U[k] - U[k] * W);
    }
  return out;
}

FiniteHeisenbergRep finite_heisenberg_rep(int N) {
  if (N < 2) throw InvalidInput("finite_heisenberg_rep: N must be >= 2");
  FiniteHeisenbergRep r;
  r.T = CMatrix::Zero(N, N);
  r.M = CMatrix::Zero(N, N);
  for (int x = 0; x < N; ++x) {
    r.T((x + 1) % N, x) = 1.0;
    r.M(x, x) = exp_i_pi(group::Rational(2 * x, N));
  }
  r.C = exp_i_pi(group::Rational(-2, N)) * CMatrix::Identity(N, N);
  return r;
}

}  // namespace dilatekit::roots
