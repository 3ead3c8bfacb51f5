#include <algorithm>

#include "dilation/detail.hpp"
#include "dilatekit/errors.hpp"

namespace dilatekit::dilation {

using detail::Index;

CVector apply_T(const DilationModel& m, const group::Gamma0Element& gamma, const CVector& v) {
  CVector out = v;
  const auto names = m.generators;
  const auto factors = group::generator_factors(m.spec(), gamma);
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) out = apply_power(m.T.at(names[it->first]), it->second, out);
  return out;
}

namespace {

CVector shift_power(const DilationModel& m, std::int64_t j, CVector v) {
  for (std::int64_t i = 0; i < j; ++i) v = m.D * v;
  for (std::int64_t i = 0; i < -j; ++i) v = m.D.adjoint() * v;
  return v;
}

}  // namespace

CVector tau_lattice(const DilationModel& m, const group::LatticePoint& x) {
  return shift_power(m, x.j, apply_T(m, x.gamma, m.eta));
}

CVector tau_word(const DilationModel& m, const group::GroupWord& w) {
  return shift_power(m, -w.m, apply_T(m, w.gamma, shift_power(m, w.n, m.eta)));
}

DilationReport assemble_dilation(const frame::GramMatrix& gram, const DilationModel& m, std::int64_t core_j,
                                 std::int64_t core_radius) {
  const Window& w = m.window;
  DilationReport rep;
  std::vector<Index> core;
  for (std::size_t x = 0; x < w.size(); ++x) {
    const std::int64_t j = w.level(x);
    if (j < -core_j || j > core_j) continue;
    bool inside = true;
    for (const auto& e : group::exponents(w.gammas()[w.gamma_index(x)]))
      if (e > core_radius || e < -core_radius) inside = false;
    if (inside) core.push_back(Index(x));
  }
  rep.core_points = core.size();
  const Index n = Index(core.size());
  CMatrix tv(Index(m.rank), n);
  for (Index c = 0; c < n; ++c) {
    tv.col(c) = tau_lattice(m, w.point(std::size_t(core[std::size_t(c)])));
    if (m.rank) rep.reconstruction = std::max(rep.reconstruction, (tv.col(c) - m.V.col(core[std::size_t(c)])).norm());
  }
  const CMatrix Ktau = tv.adjoint() * tv;
  const CMatrix G = gram.G(core, core);
  CMatrix K = -G;
  K.diagonal().array() += 1.0;
  // G~ is kept as its two summands; the first is the Gram of the projected
  // vectors, read back from the original coefficient table.
  const std::pair<CMatrix, CMatrix> Gt{gram.G(core, core), Ktau};
  rep.dilated_gram = n ? max_abs_diff(Gt.first + Gt.second, CMatrix::Identity(n, n)) : 0.0;
  rep.kernel_match = n ? max_abs_diff(Ktau, K) : 0.0;
  rep.projection_identity = n ? max_abs_diff(Gt.first, G) : 0.0;
  return rep;
}

}  // namespace dilatekit::dilation
