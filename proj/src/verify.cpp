#include <algorithm>
#include <cmath>
#include <map>

#include "dilatekit/report.hpp"
#include "dilatekit/roots.hpp"

namespace dilatekit::report {

using dilation::DilationModel;
using Eigen::Index;
using group::Integer;
using group::Window;

namespace {

CMatrix power_times(const CMatrix& T, const Integer& e, const CMatrix& X) {
  if (e > 64 || e < -64) return unitary_power(T, e) * X;
  CMatrix Y = X;
  const long steps = static_cast<long>(e < 0 ? Integer(-e) : e);
  for (long i = 0; i < steps; ++i) Y = (e < 0 ? CMatrix(T.adjoint() * Y) : CMatrix(T * Y));
  return Y;
}

// Applies prod of generator powers (product order) to the columns of X.
CMatrix apply_factors(const DilationModel& m, const std::vector<std::pair<std::size_t, Integer>>& f, CMatrix X) {
  for (auto it = f.rbegin(); it != f.rend(); ++it) X = power_times(m.T.at(m.generators[it->first]), it->second, X);
  return X;
}

// Walks the T0 path at level j from gamma, one generator step at a time.
// Returns false if some step is not a constrained T0 pair.
bool t0_path(const DilationModel& m, std::int64_t j, group::Gamma0Element cur,
             const std::vector<std::pair<std::size_t, Integer>>& factors) {
  const auto& w = m.window;
  const auto& spec = m.spec();
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
    const auto& mask = m.t0_mask.at(m.generators[it->first]);
    const auto step = *group::alpha_power(spec, -j, group::generator(spec, it->first));
    const auto back = group::gamma0_inv(spec, step);
    const Integer& e = it->second;
    if (e > Integer(w.size()) || e < -Integer(w.size())) return false;
    const long n = static_cast<long>(e < 0 ? Integer(-e) : e);
    for (long i = 0; i < n; ++i) {
      if (e > 0) {
        const std::size_t idx = w.index_of(j, cur);
        if (idx == Window::npos || !mask[idx]) return false;
        cur = group::gamma0_mul(spec, step, cur);
      } else {
        cur = group::gamma0_mul(spec, back, cur);
        const std::size_t idx = w.index_of(j, cur);
        if (idx == Window::npos || !mask[idx]) return false;
      }
    }
  }
  return true;
}

}  // namespace

bool evaluable(const DilationModel& m, const group::GroupWord& w) {
  if (m.rank == 0) return true;
  const auto& win = m.window;
  if (w.n > win.j_max() || w.n - w.m < win.j_min()) return false;
  if (w.n != 0) return true;
  return t0_path(m, 0, group::identity(m.spec()), group::generator_factors(m.spec(), w.gamma));
}

InvarianceResult invariance_sample(const DilationModel& m, const std::vector<group::GroupWord>& words,
                                   const std::vector<std::pair<group::LatticePoint, group::LatticePoint>>& pairs) {
  InvarianceResult out;
  const auto& spec = m.spec();
  std::map<std::string, CVector> cache;
  auto tau = [&](const group::GroupWord& w) -> const CVector& {
    auto key = group::to_string(spec, w);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(std::move(key), dilation::tau_word(m, w)).first;
    return it->second;
  };
  for (const auto& s : words) {
    for (const auto& [x, y] : pairs) {
      const auto wx = group::word_from_lattice(spec, x), wy = group::word_from_lattice(spec, y);
      const auto sx = group::word_mul(spec, s, wx), sy = group::word_mul(spec, s, wy);
      if (!(evaluable(m, wx) && evaluable(m, wy) && evaluable(m, sx) && evaluable(m, sy))) {
        ++out.skipped;
        continue;
      }
      ++out.sampled;
      if (m.rank == 0) continue;
      const cd a = tau(sx).dot(tau(sy));
      const cd b = tau(wx).dot(tau(wy));
      out.residual = std::max(out.residual, std::abs(a - b));
    }
  }
  return out;
}

double RelationResiduals::max_defined() const {
  double v = 0;
  for (const auto& [_, r] : blocks) v = std::max(v, r);
  for (const auto& [_, r] : h0) v = std::max(v, r);
  return v;
}

RelationResiduals relation_residuals(const DilationModel& m) {
  RelationResiduals out;
  const auto& spec = m.spec();
  const auto& w = m.window;
  for (std::size_t gi = 0; gi < m.generators.size(); ++gi) {
    const std::string& g = m.generators[gi];
    const std::string key = "[" + g + "]";
    out.blocks["shift" + key] = 0;
    out.h0["shift_h0" + key] = 0;
    out.sampled[g] = 0;
    out.skipped[g] = 0;
    if (m.rank == 0) continue;
    const auto image = group::alpha_of_generator(spec, gi);
    const CMatrix& T = m.T.at(g);
    auto defect = [&](const CMatrix& X) -> CMatrix {
      const CMatrix left = m.D * (T * (m.D.adjoint() * X));
      return left - apply_factors(m, image, X);
    };

    double blk = 0;
    for (std::int64_t n = 1; n <= w.j_max() - 1; ++n)
      if (m.chain.dim(n)) blk = std::max(blk, induced_one_norm(defect(m.chain.block(n))));
    out.blocks["shift" + key] = blk;

    std::vector<Index> cols;
    const auto& t0 = m.t0_mask.at(g);
    for (std::size_t x = 0; x < w.size(); ++x) {
      const std::int64_t j = w.level(x);
      if (j > 0 || j <= w.j_min()) continue;
      const auto& gamma = w.gammas()[w.gamma_index(x)];
      const std::size_t below = w.index_of(j - 1, gamma);
      const bool ok = t0[below] && t0_path(m, j, gamma, image);
      if (ok) cols.push_back(Index(x));
      ++(ok ? out.sampled[g] : out.skipped[g]);
    }
    if (!cols.empty()) {
      const CMatrix X = m.V(Eigen::all, cols);
      const CMatrix R = defect(X);
      double mx = 0;
      for (Index c = 0; c < R.cols(); ++c) mx = std::max(mx, R.col(c).norm());
      out.h0["shift_h0" + key] = mx;
    }
  }
  if (m.rank) out.gamma0 = roots::family_relation_residuals(spec, m.T);
  return out;
}

}  // namespace dilatekit::report
