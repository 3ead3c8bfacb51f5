#pragma once

// alpha-roots of finite-dimensional unitary representations through spectral
// calculus: principal roots, joint diagonalization of commuting families, the
// abelian construction with B = A^{-1}, the Heisenberg commutator lemma and
// its F_n generalization.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dilatekit/group.hpp"
#include "dilatekit/linalg.hpp"

namespace dilatekit::roots {

inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kRelationTol = 1e-8;
inline constexpr double kClusterTol = 1e-8;

/// Throws InvalidInput unless U is square with ||U*U - I|| <= tol.
void require_unitary(const CMatrix& U, double tol = kUnitaryTol, const std::string& what = "matrix");

/// Angles in (-pi, pi] of the unit-modulus numbers z. Values within
/// kClusterTol of each other on the circle share one branch, so a cluster
/// straddling -pi is placed at +pi as a whole.
std::vector<double> clustered_angles(std::span<const cd> z);

struct JointEigenbasis {
  CMatrix basis;                        // Q, unitary
  std::vector<CVector> eigenvalues;     // diag(Q* U_i Q), one vector per input
  double offdiag_residual = 0;          // max_i max |offdiag(Q* U_i Q)|
  std::uint64_t seed = 0;
};

/// Common eigenbasis of pairwise-commuting unitaries. Throws
/// CommutationViolation if some ||U_i U_j - U_j U_i|| > commute_tol.
JointEigenbasis joint_diagonalize(std::span<const CMatrix> us, std::uint64_t seed, double commute_tol = kRelationTol);

/// S with S^a = U; eigenvalue e^{i theta}, theta in (-pi, pi], goes to
/// e^{i (theta + 2 pi o) / a}, where o is the optional per-eigenvalue branch
/// offset (eigenvalues in the order of the internal eigenbasis; empty = 0).
CMatrix principal_root(const CMatrix& U, std::int64_t a, std::span<const std::int64_t> branch_offsets = {});

struct RepresentationTable {
  group::Family family = group::Family::FreeAbelian;
  std::map<std::string, CMatrix> gens;
  std::map<std::string, double> relation_residuals;
};

/// Relation residuals of the family: commutators for abelian; AB - CBA,
/// AC - CA, BC - CB (A = t3, B = t2, C = t1) for Heisenberg; t and z
/// relations for F_n.
std::map<std::string, double> family_relation_residuals(const group::MonomorphismSpec& spec,
                                                        const std::map<std::string, CMatrix>& gens);

/// T with T(alpha(t_j)) = rho(t_j), T(t_j) = prod_i rho(t_i)^{b_ij}, B = A^{-1}.
/// Residuals ||T(alpha(t_j)) - rho(t_j)|| are stored under "alpha_root[tj]".
RepresentationTable abelian_alpha_root(const RepresentationTable& rho, const group::IntMatrix& A, std::uint64_t seed = 0);

struct HeisenbergRoot {
  CMatrix U, V, W;
  double r1 = 0, r2 = 0, r3 = 0;  // ||W^{ab} - C||, ||UW - WU||, ||VW - WV||
};

/// U = A^{1/a}, V = B^{1/b}, W = U V U^-1 V^-1. Reports the lemma residuals
/// without asserting them. Throws RelationViolation if the inputs miss
/// AB = CBA, AC = CA, BC = CB by more than kRelationTol.
HeisenbergRoot heisenberg_alpha_root(const CMatrix& A, const CMatrix& B, const CMatrix& C, std::int64_t a, std::int64_t b);

/// U_k = rho(t_k)^{1/a_k}, W_ij = U_i U_j U_i^-1 U_j^-1. Residuals
/// "power[zi_j]" = ||W_ij^{a_i a_j} - rho(z_ij)|| and "central[zi_j,tk]".
RepresentationTable fn_alpha_root(const RepresentationTable& rho, const std::vector<group::Integer>& exps);

struct FiniteHeisenbergRep {
  CMatrix T, M, C;
};

/// T e_x = e_{x+1 mod N}, M = diag(omega^x), C = omega^{-1} I, omega = e^{2 pi i / N};
/// T M = C M T.
FiniteHeisenbergRep finite_heisenberg_rep(int N);

}  // namespace dilatekit::roots
