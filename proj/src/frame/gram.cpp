#include <algorithm>
#include <map>
#include <thread>

#include "dilatekit/errors.hpp"
#include "dilatekit/frame.hpp"
#include "dilatekit/kernels.hpp"
#include "frame/msf_detail.hpp"

namespace dilatekit::frame {

std::string kind_name(const FrameSystemSpec& s) {
  switch (s.index()) {
    case 0: return "msf_dyadic";
    case 1: return "explicit";
    default: return "band_limited_2d";
  }
}

namespace {

// Runs body(p) for every row p; rows are dealt round-robin to threads.
// Each entry is produced by exactly one call, so the result does not depend
// on the schedule.
template <class Body>
void for_rows(std::size_t n, const GramOptions& opts, Body body) {
  unsigned threads = 1;
  if (opts.parallel) threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  if (threads <= 1 || n < 2) {
    for (std::size_t p = 0; p < n; ++p) body(p);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t p = t; p < n; p += threads) body(p);
    });
  for (auto& th : pool) th.join();
}

void mirror_upper(CMatrix& G) {
  for (Eigen::Index p = 0; p < G.rows(); ++p) {
    G(p, p) = G(p, p).real();
    for (Eigen::Index q = p + 1; q < G.cols(); ++q) G(q, p) = std::conj(G(p, q));
  }
}

CMatrix msf_gram(const MSFDyadic& sys, const Window& w, const GramOptions& opts) {
  const auto& spec = w.spec();
  if (spec.family() != group::Family::FreeAbelian || spec.abelian().A != group::IntMatrix{{Integer(2)}})
    throw InvalidInput("MSF dyadic systems need the BS(1,2) family (n = 1, A = [2])");
  const std::size_t L = w.levels(), M = w.gammas_per_level(), N = w.size();

  std::vector<std::vector<IntervalSet>> overlaps(L, std::vector<IntervalSet>(L));
  for (std::size_t a = 0; a < L; ++a)
    for (std::size_t b = a; b < L; ++b)
      overlaps[a][b] = detail::overlap(sys.E, w.j_min() + std::int64_t(a), w.j_min() + std::int64_t(b));

  // omega * 2^{-j_min} is an integer for every in-window pair.
  std::vector<Integer> shift(M);
  for (std::size_t g = 0; g < M; ++g) shift[g] = std::get<group::IntVector>(w.gammas()[g]).v[0];
  const Rational scale = detail::pow2(w.j_min());

  CMatrix G = CMatrix::Zero(N, N);
  for_rows(N, opts, [&](std::size_t p) {
    const std::size_t a = p / M;
    const std::int64_t jp = w.j_min() + std::int64_t(a);
    const Integer kp = shift[p % M] << static_cast<unsigned>(a);
    for (std::size_t b = a; b < L; ++b) {
      const IntervalSet& I = overlaps[a][b];
      if (I.empty()) continue;
      const std::int64_t jq = w.j_min() + std::int64_t(b);
      std::map<Integer, cd> cache;
      for (std::size_t g = (b == a ? p % M : 0); g < M; ++g) {
        const Integer key = (shift[g] << static_cast<unsigned>(b)) - kp;
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, detail::overlap_integral(I, jp, jq, Rational(key) * scale)).first;
        G(p, b * M + g) = it->second;
      }
    }
  });
  mirror_upper(G);
  return G;
}

CMatrix explicit_gram(const ExplicitVectors& sys, const Window& w) {
  if (sys.d < 0) throw InvalidInput("explicit vectors: negative dimension");
  const std::size_t N = w.size();
  CMatrix V = CMatrix::Zero(sys.d, N);
  std::vector<bool> seen(N, false);
  for (const auto& [pt, v] : sys.vecs) {
    if (v.size() != sys.d) throw InvalidInput("explicit vectors: length differs from d");
    if (!group::matches(w.spec(), pt.gamma)) throw InvalidInput("explicit vectors: point does not match the group family");
    const std::size_t idx = w.index_of(pt);
    if (idx == Window::npos) continue;
    V.col(idx) = v;
    seen[idx] = true;
  }
  for (std::size_t i = 0; i < N; ++i)
    if (!seen[i])
      throw InvalidInput("explicit vectors: no vector for window point " + group::to_string(w.spec(), w.point(i)));
  CMatrix G = V.adjoint() * V;
  mirror_upper(G);
  return G;
}

CMatrix grid_gram(const BandLimited2D& sys, const Window& w, const GramOptions& opts) {
  if (!(w.spec() == group_of(sys.rep)))
    throw InvalidInput("band-limited preset " + rep_name(sys.rep) + " needs Heisenberg(a, b) matching the preset");
  const auto& f = sys.generator;
  if (f.nx <= 0 || f.ny <= 0 || f.values.size() != std::size_t(f.nx) * f.ny || !(f.dx > 0) || !(f.dy > 0))
    throw InvalidInput("band-limited generator grid is malformed");
  const std::size_t N = w.size();
  std::vector<Grid2D> images(N);
  for_rows(N, opts, [&](std::size_t p) { images[p] = apply_rep(sys.rep, w.point(p), f); });
  const auto weights = quadrature_weights(sys.rep, f);
  CMatrix G = CMatrix::Zero(N, N);
  for_rows(N, opts, [&](std::size_t p) {
    for (std::size_t q = p; q < N; ++q) G(p, q) = simd::weighted_dot(images[q].values, images[p].values, weights);
  });
  mirror_upper(G);
  return G;
}

}  // namespace

GramMatrix gram_matrix(const FrameSystemSpec& spec, const Window& window, const GramOptions& opts) {
  GramMatrix out{window, {}};
  if (const auto* m = std::get_if<MSFDyadic>(&spec)) {
    if (m->E.empty()) throw InvalidInput("MSF set E is empty");
    out.G = msf_gram(*m, window, opts);
  } else if (const auto* e = std::get_if<ExplicitVectors>(&spec)) {
    out.G = explicit_gram(*e, window);
  } else {
    out.G = grid_gram(std::get<BandLimited2D>(spec), window, opts);
  }
  return out;
}

}  // namespace dilatekit::frame
