#include <algorithm>
#include <cmath>
#include <numeric>

#include "dilation/detail.hpp"
#include "dilatekit/errors.hpp"

namespace dilatekit::dilation {

using detail::Index;

std::size_t SubspaceChain::offset(std::int64_t n) const {
  std::size_t off = 0;
  for (std::int64_t k = j_min; k < n; ++k) off += dim(k);
  return off;
}

std::size_t SubspaceChain::h0_dim() const { return offset(std::min<std::int64_t>(1, j_max + 1)); }

std::size_t SubspaceChain::total_dim() const { return offset(j_max + 1); }

CMatrix SubspaceChain::basis() const {
  const Index r = blocks.empty() ? 0 : blocks.front().rows();
  CMatrix Q(r, Index(total_dim()));
  Index at = 0;
  for (const auto& b : blocks) {
    Q.middleCols(at, b.cols()) = b;
    at += b.cols();
  }
  return Q;
}

CMatrix SubspaceChain::h0_basis() const { return basis().leftCols(Index(h0_dim())); }

double SubspaceChain::orthogonality_error() const {
  const CMatrix Q = basis();
  if (Q.cols() == 0) return 0.0;
  return max_abs_diff(Q.adjoint() * Q, CMatrix::Identity(Q.cols(), Q.cols()));
}

namespace {

// Extended copy of V, recomputed from V if the model carries none.
XMatrix extended_V(const KolmogorovModel& model) {
  if (model.V_ext.rows() == model.V.rows() && model.V_ext.cols() == model.V.cols()) return model.V_ext;
  return model.V.cast<cx>();
}

}  // namespace

SubspaceChain subspace_chain(const KolmogorovModel& model) {
  using XVector = Eigen::Matrix<cx, Eigen::Dynamic, 1>;
  const Window& w = model.window;
  SubspaceChain chain;
  chain.j_min = w.j_min();
  chain.j_max = w.j_max();
  const Index r = Index(model.rank);
  const long double tol = 1e-3L * std::sqrt(static_cast<long double>(std::max(model.lambda_min_kept, 0.0)));
  const XMatrix V = extended_V(model);

  // Every v(x) lives on the rows of its own component, so the whole
  // orthogonalization runs in per-component coordinates; products across
  // components are exact zeros and are skipped.
  const std::size_t C = model.components.size();
  std::vector<std::vector<Index>> rows(C);
  for (std::size_t i = 0; i < model.row_component.size(); ++i) rows[model.row_component[i]].push_back(Index(i));
  std::vector<std::size_t> comp_of(w.size());
  for (std::size_t c = 0; c < C; ++c)
    for (std::size_t x : model.components[c]) comp_of[x] = c;
  std::vector<XMatrix> prev(C);
  for (std::size_t c = 0; c < C; ++c) prev[c] = XMatrix(Index(rows[c].size()), 0);

  for (std::int64_t n = w.j_min(); n <= w.j_max(); ++n) {
    const std::size_t first = w.index_of(n, std::size_t(0));
    const std::size_t m = w.gammas_per_level();
    std::vector<XVector> X(m);
    std::vector<std::size_t> cc(m);
    std::vector<long double> norms(m);
    for (std::size_t i = 0; i < m; ++i) {
      cc[i] = comp_of[first + i];
      const auto& P = prev[cc[i]];
      X[i] = V(rows[cc[i]], Index(first + i));
      for (int pass = 0; pass < 2 && P.cols(); ++pass) X[i] -= P * (P.adjoint() * X[i]);
      norms[i] = X[i].norm();
    }
    std::vector<std::pair<std::size_t, XVector>> picked;
    std::vector<bool> used(m, false);
    while (picked.size() < m) {
      std::size_t best = m;
      for (std::size_t i = 0; i < m; ++i)
        if (!used[i] && (best == m || norms[i] > norms[best])) best = i;
      if (best == m || !(norms[best] > tol)) break;
      used[best] = true;
      const std::size_t c = cc[best];
      const auto& P = prev[c];
      XVector q = X[best];
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& [pc, p] : picked)
          if (pc == c) q -= p * p.dot(q);
        if (P.cols()) q -= P * (P.adjoint() * q);
      }
      q /= q.norm();
      for (std::size_t i = 0; i < m; ++i)
        if (cc[i] == c) {
          X[i] -= q * q.dot(X[i]);
          norms[i] = X[i].norm();
        }
      picked.emplace_back(c, std::move(q));
    }
    XMatrix B = XMatrix::Zero(r, Index(picked.size()));
    std::vector<std::vector<Index>> added(C);
    for (std::size_t k = 0; k < picked.size(); ++k) {
      const auto& [c, q] = picked[k];
      B(rows[c], Index(k)) = q;
      added[c].push_back(Index(k));
    }
    for (std::size_t c = 0; c < C; ++c) {
      if (added[c].empty()) continue;
      XMatrix next(prev[c].rows(), prev[c].cols() + Index(added[c].size()));
      next << prev[c], B(rows[c], added[c]);
      prev[c] = std::move(next);
    }
    chain.blocks.push_back(B.cast<cd>());
    chain.blocks_ext.push_back(std::move(B));
  }
  if (chain.total_dim() != model.rank)
    throw NumericalFailure("subspace chain spans " + std::to_string(chain.total_dim()) + " of " +
                           std::to_string(model.rank) + " dimensions");
  return chain;
}

namespace {

// Splits constraint pairs (x -> target) with target != npos.
void collect(const std::vector<std::size_t>& target, const std::vector<bool>& keep, std::vector<std::size_t>& src,
             std::vector<std::size_t>& tgt) {
  for (std::size_t x = 0; x < target.size(); ++x)
    if (keep[x] && target[x] != group::Window::npos) {
      src.push_back(x);
      tgt.push_back(target[x]);
    }
}

}  // namespace

ShiftOperator build_shift(const KolmogorovModel& model, const IsometryOptions& opts) {
  const Window& w = model.window;
  ShiftOperator out;
  const auto up = detail::shift_map(w);
  out.mask.assign(w.size(), false);
  std::vector<std::size_t> src, tgt;
  collect(up, std::vector<bool>(w.size(), true), src, tgt);
  for (std::size_t x : src) out.mask[x] = true;
  if (model.rank == 0) return out;

  out.consistency = detail::gram_mismatch(model, tgt, src);
  if (!(out.consistency <= opts.consistency_tol))
    throw RelationViolation("shift constraints are inconsistent: Gram mismatch " + std::to_string(out.consistency));

  const auto groups = detail::row_groups(model);
  const CMatrix M = detail::cross_product(model, tgt, src);
  auto pr = detail::procrustes(M, groups);
  out.D = std::move(pr.U);
  out.constrained_rank = pr.rank;
  out.unitarity = unitarity_error(out.D);

  std::vector<Index> s(src.begin(), src.end()), t(tgt.begin(), tgt.end());
  const CMatrix Vs = model.V(Eigen::all, s);
  const CMatrix Dv = detail::grouped_product(out.D, Vs, groups);
  out.constraint_residual = detail::max_column_distance(Dv, model.V(Eigen::all, t));
  return out;
}

CMatrix TranslationZero::ambient(const std::string& g, const SubspaceChain& chain) const {
  const auto& bl = blocks.at(g);
  const Index r = chain.blocks.empty() ? 0 : chain.blocks.front().rows();
  CMatrix T = CMatrix::Zero(r, r);
  for (std::size_t i = 0; i < bl.size(); ++i) {
    const CMatrix& Q = chain.blocks[i];
    if (Q.cols() == 0) continue;
    const CMatrix QB = Q * bl[i];
    T += QB * Q.adjoint();
  }
  return T;
}

TranslationZero build_T0(const KolmogorovModel& model, const SubspaceChain& chain, const IsometryOptions& opts) {
  const Window& w = model.window;
  const auto& spec = w.spec();
  TranslationZero out;
  out.generators = spec.generator_names();
  const auto groups = detail::row_groups(model);
  const std::int64_t top = std::min<std::int64_t>(0, w.j_max());

  // W_n = Q_n^* V for the H0 blocks. The isometries are solved on the
  // extended copies; residuals are measured on the rounded ones.
  const bool ext = chain.blocks_ext.size() == chain.blocks.size();
  const XMatrix Vx = ext ? extended_V(model) : XMatrix();
  std::vector<CMatrix> W;
  std::vector<XMatrix> Wx;
  for (std::int64_t n = w.j_min(); n <= top; ++n) {
    W.push_back(detail::grouped_product(CMatrix(chain.block(n).adjoint()), model.V, groups));
    if (ext) {
      const XMatrix& Q = chain.blocks_ext[std::size_t(n - w.j_min())];
      Wx.push_back(detail::grouped_product(XMatrix(Q.adjoint()), Vx, groups));
    }
  }

  for (std::size_t g = 0; g < out.generators.size(); ++g) {
    const std::string& name = out.generators[g];
    const auto tr = detail::translation_map(w, g);
    auto& mask = out.mask[name];
    mask.assign(w.size(), false);
    for (std::size_t x = 0; x < w.size(); ++x) mask[x] = tr[x] != Window::npos;
    double cons = 0, res = 0, unit = 0;
    auto& bl = out.blocks[name];
    for (std::int64_t n = w.j_min(); n <= top; ++n) {
      const Index d = Index(chain.dim(n));
      std::vector<Index> s, t;
      for (std::size_t x = 0; x < w.size(); ++x)
        if (mask[x] && w.level(x) >= n) {
          s.push_back(Index(x));
          t.push_back(Index(tr[x]));
        }
      const std::size_t at = std::size_t(n - w.j_min());
      const CMatrix S = W[at](Eigen::all, s), T = W[at](Eigen::all, t);
      if (d == 0) {
        bl.emplace_back(0, 0);
        continue;
      }
      cons = std::max(cons, s.empty() ? 0.0 : max_abs_diff(S.adjoint() * S, T.adjoint() * T));
      const auto single = detail::contiguous_groups({std::size_t(d)});
      CMatrix U;
      if (ext) {
        const XMatrix Sx = Wx[at](Eigen::all, s), Tx = Wx[at](Eigen::all, t);
        U = detail::procrustes<XMatrix>(Tx * Sx.adjoint(), single).U.cast<cd>();
      } else {
        U = detail::procrustes(CMatrix(T * S.adjoint()), single).U;
      }
      unit = std::max(unit, unitarity_error(U));
      if (!s.empty()) res = std::max(res, detail::max_column_distance(U * S, T));
      bl.push_back(std::move(U));
    }
    out.consistency[name] = cons;
    out.constraint_residual[name] = res;
    out.unitarity[name] = unit;
    if (!(cons <= opts.consistency_tol))
      throw RelationViolation("translation constraints for " + name + " are inconsistent: Gram mismatch " +
                              std::to_string(cons));
  }
  return out;
}

}  // namespace dilatekit::dilation
