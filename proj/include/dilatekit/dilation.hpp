#pragma once

// Complement kernel, Kolmogorov factorization, the shift D, the translations
// T0 on H0, the subspace chain H0 < H1 < ... and the iterated alpha-roots
// that assemble the representation tau on C^r.
//
// Every operator is exact only on its constrained span; the rest of the
// space is filled by a canonical unitary completion. Masks record which
// window points took part in each constraint.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "dilatekit/frame.hpp"
#include "dilatekit/group.hpp"
#include "dilatekit/linalg.hpp"

namespace dilatekit::dilation {

using group::MonomorphismSpec;
using group::Window;

struct ComplementKernel {
  Window window;
  CMatrix K;
};

/// K = I - G.
ComplementKernel complement_kernel(const frame::GramMatrix& G);

struct KRelationReport {
  double shift_residual = 0;        // max |K((j+1,g),(j'+1,g')) - K((j,g),(j',g'))|
  double translation_residual = 0;  // max over generators, j, j' <= 0
  std::size_t shift_checked = 0, shift_total = 0;
  std::size_t translation_checked = 0, translation_total = 0;
  double checkable_fraction() const;
};

KRelationReport check_k_relations(const ComplementKernel& K, const MonomorphismSpec& spec);

/// Smallest eigenvalue of K (Hermitian part), block by block over the
/// connected components of its nonzero pattern.
double psd_check(const ComplementKernel& K);

struct KolmogorovModel {
  Window window;
  std::size_t rank = 0;
  CMatrix V;                 // r x N, column x is v(x), K = V* V
  XMatrix V_ext;             // V before rounding to double
  RVector eigenvalues;       // all N eigenvalues, descending
  double lambda_max = 0;
  double lambda_min_kept = 0;
  double residual = 0;       // max |K - V* V|
  /// Connected components of K's nonzero pattern (window indices, ascending)
  /// and, for each row of V, the component that carries it.
  std::vector<std::vector<std::size_t>> components;
  std::vector<std::size_t> row_component;
};

/// K = Q Lambda Q*, eigenvalues descending, r = #{lambda > rank_tol lambda_max},
/// V = Lambda_r^{1/2} Q_r* with each eigenvector's largest entry real positive.
/// Throws IndefiniteKernel if min eigenvalue < -psd_tol.
KolmogorovModel kolmogorov_factorize(const ComplementKernel& K, double rank_tol, double psd_tol);

struct SubspaceChain {
  std::int64_t j_min = 0, j_max = 0;
  /// blocks[n - j_min]: orthonormal basis (r x d_n) of K_n = H_n - H_{n-1}.
  std::vector<CMatrix> blocks;
  /// The same blocks before rounding; empty for a chain read back from disk.
  std::vector<XMatrix> blocks_ext;

  const CMatrix& block(std::int64_t n) const { return blocks[static_cast<std::size_t>(n - j_min)]; }
  std::size_t dim(std::int64_t n) const { return static_cast<std::size_t>(block(n).cols()); }
  /// Column offset of block n inside basis().
  std::size_t offset(std::int64_t n) const;
  std::size_t h0_dim() const;
  std::size_t total_dim() const;
  /// All blocks side by side, r x r.
  CMatrix basis() const;
  /// Basis of H0 = K_{j_min} + ... + K_0.
  CMatrix h0_basis() const;
  /// max |Q* Q - I| over the full basis.
  double orthogonality_error() const;
};

/// Level-by-level column-pivoted Gram-Schmidt of the v's (largest residual
/// first, ties by window order). Throws NumericalFailure if the blocks do
/// not add up to r.
SubspaceChain subspace_chain(const KolmogorovModel& model);

struct ShiftOperator {
  CMatrix D;
  std::vector<bool> mask;        // window index x: (j+1, gamma) also in window
  double constraint_residual = 0;  // max ||D v(x) - v(x+)||_2 over the mask
  double consistency = 0;          // max |S*S - T*T| on the constraint Gram
  double unitarity = 0;
  std::size_t constrained_rank = 0;
};

struct IsometryOptions {
  double consistency_tol = 1e-8;
};

/// D v(j,g) = v(j+1,g) on the constrained span, canonical completion
/// elsewhere. Throws RelationViolation if the constraint Gram matrices differ
/// by more than consistency_tol.
ShiftOperator build_shift(const KolmogorovModel& model, const IsometryOptions& opts = {});

struct TranslationZero {
  std::vector<std::string> generators;
  /// Per generator, one unitary per chain block n = j_min..0 (chain coordinates).
  std::map<std::string, std::vector<CMatrix>> blocks;
  /// Per generator: x = (j, g) with j <= 0 whose target (j, alpha^{-j}(t) g) is in the window.
  std::map<std::string, std::vector<bool>> mask;
  std::map<std::string, double> constraint_residual;
  std::map<std::string, double> consistency;
  std::map<std::string, double> unitarity;

  /// Generator action on H0 in ambient coordinates.
  CMatrix ambient(const std::string& g, const SubspaceChain& chain) const;
};

/// T0(t) v(j, g) = v(j, alpha^{-j}(t) g) for j <= 0, solved block by block on
/// the chain blocks K_n, n <= 0.
TranslationZero build_T0(const KolmogorovModel& model, const SubspaceChain& chain, const IsometryOptions& opts = {});

struct DilationModel {
  Window window;
  std::size_t rank = 0;
  CMatrix V;
  SubspaceChain chain;
  CMatrix D;
  std::vector<std::string> generators;
  std::map<std::string, CMatrix> T;                     // ambient r x r
  std::map<std::string, std::vector<CMatrix>> T_blocks;  // chain coordinates, n = j_min..j_max
  CVector eta;
  std::vector<bool> shift_mask;
  std::map<std::string, std::vector<bool>> t0_mask;
  /// Named diagnostics gathered while building (leakage, root residuals, ...).
  std::map<std::string, double> diagnostics;

  const MonomorphismSpec& spec() const { return window.spec(); }
};

struct TauOptions {
  double leakage_tol = 1e-8;
  double root_tol = 1e-8;
  std::uint64_t seed = 0;
};

/// Iterates T_n = alpha-root of rho_n = D T_{n-1} D^{-1} compressed to K_n,
/// n = 1..j_max, and assembles T = T0 + T_1 + ... . Throws AlphaRootFailure
/// on leakage or root residuals above tolerance.
DilationModel build_tau(const KolmogorovModel& model, const SubspaceChain& chain, const ShiftOperator& D,
                        const TranslationZero& T0, const TauOptions& opts = {});

/// The model for r = 0: everything empty.
DilationModel trivial_model(const KolmogorovModel& model);

/// tau(u^j gamma) eta = D^j T(gamma) eta.
CVector tau_lattice(const DilationModel& m, const group::LatticePoint& x);
/// tau(u^-m gamma u^n) eta = D^-m T(gamma) D^n eta.
CVector tau_word(const DilationModel& m, const group::GroupWord& w);
/// T(gamma) applied to a vector, generator factors right to left.
CVector apply_T(const DilationModel& m, const group::Gamma0Element& gamma, const CVector& v);

struct DilationReport {
  std::size_t core_points = 0;
  double reconstruction = 0;   // max ||D^j T(g) eta - v(j,g)||_2 on the core
  double dilated_gram = 0;     // max |G + K_tau - I| on the core
  double kernel_match = 0;     // max |K_tau - K| on the core
  double projection_identity = 0;  // max |P1 G~ - G|, P1 G~ the Gram of the first components
};

/// Core = levels |j| <= core_j, gammas with sup-norm <= core_radius.
DilationReport assemble_dilation(const frame::GramMatrix& gram, const DilationModel& m, std::int64_t core_j,
                                 std::int64_t core_radius);

}  // namespace dilatekit::dilation
