#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dilatekit/dilation.hpp"

namespace dilatekit::dilation::detail {

using Index = Eigen::Index;
using Groups = std::vector<std::vector<Index>>;

/// Connected components of the exact nonzero pattern of a square matrix,
/// each sorted, ordered by smallest member.
std::vector<std::vector<std::size_t>> pattern_components(const CMatrix& K);

/// A * B with the inner dimension split into groups. Rows of A and columns
/// of B that vanish on a group are skipped for that group.
/// Instantiated for CMatrix and XMatrix.
template <class M>
M grouped_product(const M& A, const M& B, const Groups& inner);
inline CMatrix grouped_product(const CMatrix& A, const CMatrix& B, const Groups& inner) {
  return grouped_product<CMatrix>(A, B, inner);
}
inline XMatrix grouped_product(const XMatrix& A, const XMatrix& B, const Groups& inner) {
  return grouped_product<XMatrix>(A, B, inner);
}

/// Rows of V grouped by Kolmogorov component.
Groups row_groups(const KolmogorovModel& m);

/// Contiguous groups of sizes d_0, d_1, ...
Groups contiguous_groups(const std::vector<std::size_t>& sizes);

/// V(:, tgt) V(:, src)^*.
CMatrix cross_product(const KolmogorovModel& m, std::span<const std::size_t> tgt, std::span<const std::size_t> src);

/// max |S* S - T* T| with S = V(:, src), T = V(:, tgt).
double gram_mismatch(const KolmogorovModel& m, std::span<const std::size_t> tgt, std::span<const std::size_t> src);

template <class M>
struct ProcrustesT {
  M U;
  std::size_t rank = 0;
};
using Procrustes = ProcrustesT<CMatrix>;

/// Polar factor of M on the singular directions above 8 eps sigma_max,
/// solved per bipartite component of M's block pattern over `groups`. The
/// leftover left and right complements are spanned by pivoted projections
/// of standard basis vectors and paired in order of their pivot index.
/// Instantiated for CMatrix and XMatrix.
template <class M>
ProcrustesT<M> procrustes(const M& A, const Groups& groups);
inline Procrustes procrustes(const CMatrix& A, const Groups& groups) { return procrustes<CMatrix>(A, groups); }

/// Window index of (j + 1, g) for each x = (j, g), or npos.
std::vector<std::size_t> shift_map(const Window& w);
/// Window index of (j, alpha^{-j}(t_gen) g) for each x = (j, g) with j <= 0, or npos.
std::vector<std::size_t> translation_map(const Window& w, std::size_t gen);

/// max_x ||A x_col - B y_col||_2 over paired columns.
double max_column_distance(const CMatrix& A, const CMatrix& B);

}  // namespace dilatekit::dilation::detail
