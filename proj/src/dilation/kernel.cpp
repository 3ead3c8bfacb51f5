#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "dilation/detail.hpp"
#include "dilatekit/errors.hpp"

namespace dilatekit::dilation {

namespace detail {

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

std::vector<std::vector<std::size_t>> pattern_components(const CMatrix& K) {
  const std::size_t n = static_cast<std::size_t>(K.rows());
  UnionFind uf(n);
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t p = 0; p < n; ++p)
      if (p != q && K(Index(p), Index(q)) != 0.0) uf.unite(p, q);
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> slot(n, std::size_t(-1));
  for (std::size_t p = 0; p < n; ++p) {
    const std::size_t r = uf.find(p);
    if (slot[r] == std::size_t(-1)) {
      slot[r] = out.size();
      out.emplace_back();
    }
    out[slot[r]].push_back(p);
  }
  return out;
}

template <class M>
M grouped_product(const M& A, const M& B, const Groups& inner) {
  using S = typename M::Scalar;
  M C = M::Zero(A.rows(), B.cols());
  std::vector<Index> rows, cols;
  for (const auto& g : inner) {
    if (g.empty()) continue;
    rows.clear();
    cols.clear();
    for (Index i = 0; i < A.rows(); ++i)
      for (Index t : g)
        if (A(i, t) != S(0)) {
          rows.push_back(i);
          break;
        }
    if (rows.empty()) continue;
    for (Index c = 0; c < B.cols(); ++c)
      for (Index t : g)
        if (B(t, c) != S(0)) {
          cols.push_back(c);
          break;
        }
    if (cols.empty()) continue;
    const M part = A(rows, g) * B(g, cols);
    C(rows, cols) += part;
  }
  return C;
}

template CMatrix grouped_product(const CMatrix&, const CMatrix&, const Groups&);
template XMatrix grouped_product(const XMatrix&, const XMatrix&, const Groups&);

Groups row_groups(const KolmogorovModel& m) {
  Groups g(m.components.size());
  for (std::size_t i = 0; i < m.row_component.size(); ++i) g[m.row_component[i]].push_back(Index(i));
  std::erase_if(g, [](const auto& v) { return v.empty(); });
  return g;
}

Groups contiguous_groups(const std::vector<std::size_t>& sizes) {
  Groups g;
  Index at = 0;
  for (std::size_t s : sizes) {
    std::vector<Index> idx(s);
    std::iota(idx.begin(), idx.end(), at);
    at += Index(s);
    g.push_back(std::move(idx));
  }
  return g;
}

namespace {

std::vector<std::size_t> component_of_points(const KolmogorovModel& m) {
  std::vector<std::size_t> comp(m.window.size());
  for (std::size_t c = 0; c < m.components.size(); ++c)
    for (std::size_t x : m.components[c]) comp[x] = c;
  return comp;
}

std::vector<std::vector<Index>> rows_by_component(const KolmogorovModel& m) {
  std::vector<std::vector<Index>> rows(m.components.size());
  for (std::size_t i = 0; i < m.row_component.size(); ++i) rows[m.row_component[i]].push_back(Index(i));
  return rows;
}

}  // namespace

CMatrix cross_product(const KolmogorovModel& m, std::span<const std::size_t> tgt, std::span<const std::size_t> src) {
  const auto comp = component_of_points(m);
  const auto rows = rows_by_component(m);
  std::map<std::pair<std::size_t, std::size_t>, std::pair<std::vector<Index>, std::vector<Index>>> buckets;
  for (std::size_t t = 0; t < tgt.size(); ++t) {
    auto& b = buckets[{comp[tgt[t]], comp[src[t]]}];
    b.first.push_back(Index(tgt[t]));
    b.second.push_back(Index(src[t]));
  }
  const Index r = m.V.rows();
  CMatrix M = CMatrix::Zero(r, r);
  for (const auto& [key, cols] : buckets) {
    const auto& rt = rows[key.first];
    const auto& rs = rows[key.second];
    if (rt.empty() || rs.empty()) continue;
    const CMatrix part = m.V(rt, cols.first) * m.V(rs, cols.second).adjoint();
    M(rt, rs) += part;
  }
  return M;
}

double gram_mismatch(const KolmogorovModel& m, std::span<const std::size_t> tgt, std::span<const std::size_t> src) {
  const auto comp = component_of_points(m);
  const auto rows = rows_by_component(m);
  const Index n = Index(src.size());
  CMatrix diff = CMatrix::Zero(n, n);
  auto accumulate = [&](std::span<const std::size_t> pts, double sign) {
    std::map<std::size_t, std::pair<std::vector<Index>, std::vector<Index>>> by;  // component -> (slot, point)
    for (Index s = 0; s < n; ++s) {
      auto& b = by[comp[pts[std::size_t(s)]]];
      b.first.push_back(s);
      b.second.push_back(Index(pts[std::size_t(s)]));
    }
    for (const auto& [c, sp] : by) {
      if (rows[c].empty()) continue;
      const CMatrix blk = m.V(rows[c], sp.second);
      const CMatrix g = blk.adjoint() * blk;
      diff(sp.first, sp.first) += sign * g;
    }
  };
  accumulate(src, 1.0);
  accumulate(tgt, -1.0);
  return n ? max_abs(diff) : 0.0;
}

namespace {

template <class M>
struct Extra {
  Index pivot;
  const std::vector<Index>* idx;
  Eigen::Matrix<typename M::Scalar, Eigen::Dynamic, 1> v;
};

// Pivoted projection of the standard basis (coordinates idx) onto the
// complement of span(Z).
template <class M>
void complement(const M& Z, const std::vector<Index>& idx, std::vector<Extra<M>>& out) {
  using Vec = Eigen::Matrix<typename M::Scalar, Eigen::Dynamic, 1>;
  const Index c = Index(idx.size());
  const Index need = c - Z.cols();
  if (need <= 0) return;
  M R = M::Identity(c, c);
  if (Z.cols()) R.noalias() -= Z * Z.adjoint();
  auto norms = R.colwise().norm().eval();
  std::vector<bool> used(std::size_t(c), false);
  M Q(c, need);
  for (Index k = 0; k < need; ++k) {
    Index best = -1;
    for (Index i = 0; i < c; ++i)
      if (!used[std::size_t(i)] && (best < 0 || norms(i) > norms(best))) best = i;
    used[std::size_t(best)] = true;
    Vec q = R.col(best);
    for (int pass = 0; pass < 2; ++pass) {
      if (Z.cols()) q -= Z * (Z.adjoint() * q);
      if (k) q -= Q.leftCols(k) * (Q.leftCols(k).adjoint() * q);
    }
    const auto nq = q.norm();
    if (!(nq > 0)) throw NumericalFailure("unitary completion: complement collapsed");
    q /= nq;
    Q.col(k) = q;
    const auto coef = (q.adjoint() * R).eval();
    R.noalias() -= q * coef;
    norms = R.colwise().norm();
    out.push_back({idx[std::size_t(best)], &idx, q});
  }
}

// Pairs the leftover complements in order of their pivot index.
template <class M>
void pair_complements(std::vector<Extra<M>>& dom, std::vector<Extra<M>>& ran, M& U) {
  if (dom.size() != ran.size()) throw NumericalFailure("unitary completion: complement dimensions differ");
  auto by_pivot = [](const Extra<M>& a, const Extra<M>& b) { return a.pivot < b.pivot; };
  std::stable_sort(dom.begin(), dom.end(), by_pivot);
  std::stable_sort(ran.begin(), ran.end(), by_pivot);
  for (std::size_t i = 0; i < dom.size(); ++i) {
    const M part = ran[i].v * dom[i].v.adjoint();
    U(*ran[i].idx, *dom[i].idx) += part;
  }
}

}  // namespace

template <class M>
ProcrustesT<M> procrustes(const M& A, const Groups& groups) {
  using S = typename M::Scalar;
  using Real = typename M::RealScalar;
  using RVec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
  const std::size_t G = groups.size();
  const Index n = A.rows();
  UnionFind uf(2 * G);
  for (std::size_t a = 0; a < G; ++a)
    for (std::size_t b = 0; b < G; ++b) {
      bool nz = false;
      for (Index c : groups[b]) {
        for (Index r : groups[a])
          if (A(r, c) != S(0)) {
            nz = true;
            break;
          }
        if (nz) break;
      }
      if (nz) uf.unite(a, G + b);
    }

  struct Comp {
    std::vector<Index> rows, cols;
    M P, Z;
    RVec s;
  };
  std::vector<Comp> comps;
  std::vector<std::size_t> slot(2 * G, std::size_t(-1));
  for (std::size_t node = 0; node < 2 * G; ++node) {
    const std::size_t root = uf.find(node);
    if (slot[root] == std::size_t(-1)) {
      slot[root] = comps.size();
      comps.emplace_back();
    }
    auto& c = comps[slot[root]];
    auto& dst = node < G ? c.rows : c.cols;
    const auto& src = groups[node < G ? node : node - G];
    dst.insert(dst.end(), src.begin(), src.end());
  }

  Real smax = 0;
  for (auto& c : comps) {
    std::sort(c.rows.begin(), c.rows.end());
    std::sort(c.cols.begin(), c.cols.end());
    if (c.rows.empty() || c.cols.empty()) continue;
    Eigen::BDCSVD<M> svd(A(c.rows, c.cols), Eigen::ComputeThinU | Eigen::ComputeThinV);
    c.P = svd.matrixU();
    c.Z = svd.matrixV();
    c.s = svd.singularValues();
    if (c.s.size()) smax = std::max(smax, c.s(0));
  }
  const Real thr = 8 * Eigen::NumTraits<Real>::epsilon() * smax;

  ProcrustesT<M> out;
  out.U = M::Zero(n, n);
  std::vector<Extra<M>> dom, ran;
  for (auto& c : comps) {
    Index k = 0;
    while (k < c.s.size() && c.s(k) > thr) ++k;
    const M Pk = k ? M(c.P.leftCols(k)) : M(Index(c.rows.size()), 0);
    const M Zk = k ? M(c.Z.leftCols(k)) : M(Index(c.cols.size()), 0);
    if (k) {
      const M part = Pk * Zk.adjoint();
      out.U(c.rows, c.cols) += part;
    }
    out.rank += std::size_t(k);
    complement(Zk, c.cols, dom);
    complement(Pk, c.rows, ran);
  }
  pair_complements(dom, ran, out.U);
  return out;
}

template ProcrustesT<CMatrix> procrustes(const CMatrix&, const Groups&);
template ProcrustesT<XMatrix> procrustes(const XMatrix&, const Groups&);

double max_column_distance(const CMatrix& A, const CMatrix& B) {
  double m = 0;
  for (Index c = 0; c < A.cols(); ++c) m = std::max(m, (A.col(c) - B.col(c)).norm());
  return m;
}

}  // namespace detail

using detail::Index;

double KRelationReport::checkable_fraction() const {
  const std::size_t total = shift_total + translation_total;
  return total ? double(shift_checked + translation_checked) / double(total) : 1.0;
}

ComplementKernel complement_kernel(const frame::GramMatrix& G) {
  if (G.G.rows() != G.G.cols() || std::size_t(G.G.rows()) != G.window.size())
    throw InvalidInput("Gram matrix does not match its window");
  ComplementKernel out{G.window, -G.G};
  out.K.diagonal().array() += 1.0;
  return out;
}

namespace {

// For each window index x = (j, g): index of (j + 1, g), or npos.
std::vector<std::size_t> shift_targets(const Window& w) {
  std::vector<std::size_t> t(w.size(), Window::npos);
  for (std::size_t x = 0; x < w.size(); ++x) {
    const std::int64_t j = w.level(x);
    if (j < w.j_max()) t[x] = w.index_of(j + 1, w.gamma_index(x));
  }
  return t;
}

// For x = (j, g) with j <= 0: index of (j, alpha^{-j}(t) g), or npos.
std::vector<std::size_t> translation_targets(const Window& w, std::size_t gen) {
  const auto& spec = w.spec();
  std::vector<std::size_t> t(w.size(), Window::npos);
  const auto base = group::generator(spec, gen);
  std::map<std::int64_t, group::Gamma0Element> moved;
  for (std::int64_t j = w.j_min(); j <= std::min<std::int64_t>(0, w.j_max()); ++j) moved[j] = *group::alpha_power(spec, -j, base);
  for (std::size_t x = 0; x < w.size(); ++x) {
    const std::int64_t j = w.level(x);
    if (j > 0) continue;
    t[x] = w.index_of(j, group::gamma0_mul(spec, moved.at(j), w.gammas()[w.gamma_index(x)]));
  }
  return t;
}

}  // namespace

namespace detail {
std::vector<std::size_t> shift_map(const Window& w) { return shift_targets(w); }
std::vector<std::size_t> translation_map(const Window& w, std::size_t gen) { return translation_targets(w, gen); }
}  // namespace detail

KRelationReport check_k_relations(const ComplementKernel& K, const MonomorphismSpec& spec) {
  const Window& w = K.window;
  if (!(w.spec() == spec)) throw InvalidInput("kernel window belongs to a different group");
  const std::size_t N = w.size();
  KRelationReport rep;

  const auto up = shift_targets(w);
  rep.shift_total = N * N;
  for (std::size_t y = 0; y < N; ++y) {
    if (up[y] == Window::npos) continue;
    for (std::size_t x = 0; x < N; ++x) {
      if (up[x] == Window::npos) continue;
      ++rep.shift_checked;
      rep.shift_residual = std::max(rep.shift_residual, std::abs(K.K(Index(up[x]), Index(up[y])) - K.K(Index(x), Index(y))));
    }
  }

  std::size_t low = 0;
  for (std::size_t x = 0; x < N; ++x) low += w.level(x) <= 0;
  for (std::size_t g = 0; g < spec.rank(); ++g) {
    const auto tr = translation_targets(w, g);
    rep.translation_total += low * low;
    for (std::size_t y = 0; y < N; ++y) {
      if (tr[y] == Window::npos) continue;
      for (std::size_t x = 0; x < N; ++x) {
        if (tr[x] == Window::npos) continue;
        ++rep.translation_checked;
        rep.translation_residual =
            std::max(rep.translation_residual, std::abs(K.K(Index(tr[x]), Index(tr[y])) - K.K(Index(x), Index(y))));
      }
    }
  }
  return rep;
}

namespace {

CMatrix hermitian_part(const CMatrix& M) { return (M + M.adjoint()) / 2.0; }

struct EigenPair {
  long double lambda;
  std::size_t comp;
  Eigen::Matrix<cx, Eigen::Dynamic, 1> vec;  // restricted to the component
};

std::vector<EigenPair> component_eigen(const CMatrix& H, const std::vector<std::vector<std::size_t>>& comps) {
  std::vector<EigenPair> out;
  out.reserve(std::size_t(H.rows()));
  for (std::size_t c = 0; c < comps.size(); ++c) {
    std::vector<Index> idx(comps[c].begin(), comps[c].end());
    const XMatrix block = H(idx, idx).cast<cx>();
    Eigen::SelfAdjointEigenSolver<XMatrix> es(block);
    if (es.info() != Eigen::Success) throw NumericalFailure("Hermitian eigensolver did not converge");
    for (Index k = es.eigenvalues().size() - 1; k >= 0; --k) out.push_back({es.eigenvalues()(k), c, es.eigenvectors().col(k)});
  }
  std::stable_sort(out.begin(), out.end(), [](const EigenPair& a, const EigenPair& b) { return a.lambda > b.lambda; });
  return out;
}

}  // namespace

double psd_check(const ComplementKernel& K) {
  if (K.K.size() == 0) return 0.0;
  const CMatrix H = hermitian_part(K.K);
  double mn = std::numeric_limits<double>::infinity();
  for (const auto& comp : detail::pattern_components(H)) {
    std::vector<Index> idx(comp.begin(), comp.end());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(H(idx, idx), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalFailure("Hermitian eigensolver did not converge");
    mn = std::min(mn, es.eigenvalues()(0));
  }
  return mn;
}

KolmogorovModel kolmogorov_factorize(const ComplementKernel& K, double rank_tol, double psd_tol) {
  KolmogorovModel m;
  m.window = K.window;
  const Index N = K.K.rows();
  if (hermitian_error(K.K) > 1e-12 * std::max(1.0, max_abs(K.K)))
    throw InvalidInput("complement kernel is not Hermitian");
  const CMatrix H = hermitian_part(K.K);
  m.components = detail::pattern_components(H);
  auto pairs = component_eigen(H, m.components);

  m.eigenvalues.resize(N);
  for (Index i = 0; i < N; ++i) m.eigenvalues(i) = double(pairs[std::size_t(i)].lambda);
  if (N && m.eigenvalues(N - 1) < -psd_tol)
    throw IndefiniteKernel("complement kernel has eigenvalue " + std::to_string(m.eigenvalues(N - 1)) + " below -" +
                           std::to_string(psd_tol));
  m.lambda_max = N ? std::max(0.0, m.eigenvalues(0)) : 0.0;
  std::size_t r = 0;
  if (m.lambda_max > 0)
    while (r < std::size_t(N) && m.eigenvalues(Index(r)) > rank_tol * m.lambda_max) ++r;
  m.rank = r;
  m.lambda_min_kept = r ? m.eigenvalues(Index(r) - 1) : 0.0;

  m.V_ext = XMatrix::Zero(Index(r), N);
  m.row_component.resize(r);
  for (std::size_t i = 0; i < r; ++i) {
    const auto& ep = pairs[i];
    auto q = ep.vec;
    Index big = 0;
    for (Index k = 1; k < q.size(); ++k)
      if (std::abs(q(k)) > std::abs(q(big))) big = k;
    if (q.size() && q(big) != cx(0)) q *= std::conj(q(big)) / std::abs(q(big));
    q(big) = std::abs(q(big));
    const long double s = std::sqrt(ep.lambda);
    const auto& comp = m.components[ep.comp];
    for (std::size_t k = 0; k < comp.size(); ++k) m.V_ext(Index(i), Index(comp[k])) = s * std::conj(q(Index(k)));
    m.row_component[i] = ep.comp;
  }
  m.V = m.V_ext.cast<cd>();

  // Residual per component: off-component entries of K and V*V both vanish.
  double res = 0;
  std::vector<std::vector<Index>> rows(m.components.size());
  for (std::size_t i = 0; i < r; ++i) rows[m.row_component[i]].push_back(Index(i));
  for (std::size_t c = 0; c < m.components.size(); ++c) {
    std::vector<Index> idx(m.components[c].begin(), m.components[c].end());
    CMatrix approx = CMatrix::Zero(Index(idx.size()), Index(idx.size()));
    if (!rows[c].empty()) {
      const CMatrix blk = m.V(rows[c], idx);
      approx = blk.adjoint() * blk;
    }
    res = std::max(res, max_abs_diff(K.K(idx, idx), approx));
  }
  m.residual = res;
  return m;
}

}  // namespace dilatekit::dilation
