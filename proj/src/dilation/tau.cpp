#include <algorithm>
#include <sstream>

#include "dilation/detail.hpp"
#include "dilatekit/errors.hpp"
#include "dilatekit/roots.hpp"

namespace dilatekit::dilation {

using detail::Index;

namespace {

std::string level_key(std::int64_t n, const std::string& what) {
  std::ostringstream os;
  os << what << "[n=" << n << "]";
  return os.str();
}

}  // namespace

DilationModel trivial_model(const KolmogorovModel& model) {
  DilationModel m;
  m.window = model.window;
  m.rank = 0;
  m.V = model.V;
  m.chain.j_min = model.window.j_min();
  m.chain.j_max = model.window.j_max();
  m.chain.blocks.assign(model.window.levels(), CMatrix(0, 0));
  m.D = CMatrix(0, 0);
  m.generators = model.window.spec().generator_names();
  for (const auto& g : m.generators) {
    m.T[g] = CMatrix(0, 0);
    m.T_blocks[g].assign(model.window.levels(), CMatrix(0, 0));
  }
  m.eta = CVector(0);
  const auto up = detail::shift_map(m.window);
  m.shift_mask.assign(up.size(), false);
  for (std::size_t x = 0; x < up.size(); ++x) m.shift_mask[x] = up[x] != Window::npos;
  for (std::size_t g = 0; g < m.generators.size(); ++g) {
    const auto tr = detail::translation_map(m.window, g);
    auto& mask = m.t0_mask[m.generators[g]];
    mask.assign(tr.size(), false);
    for (std::size_t x = 0; x < tr.size(); ++x) mask[x] = tr[x] != Window::npos;
  }
  return m;
}

DilationModel build_tau(const KolmogorovModel& model, const SubspaceChain& chain, const ShiftOperator& D,
                        const TranslationZero& T0, const TauOptions& opts) {
  if (model.rank == 0) return trivial_model(model);
  const Window& w = model.window;
  const auto& spec = w.spec();
  DilationModel m;
  m.window = w;
  m.rank = model.rank;
  m.V = model.V;
  m.chain = chain;
  m.D = D.D;
  m.generators = spec.generator_names();
  m.shift_mask = D.mask;
  m.t0_mask = T0.mask;
  const auto groups = detail::row_groups(model);

  for (const auto& g : m.generators) {
    m.T_blocks[g] = T0.blocks.at(g);
    m.diagnostics["t0_constraint[" + g + "]"] = T0.constraint_residual.at(g);
    m.diagnostics["t0_unitarity[" + g + "]"] = T0.unitarity.at(g);
  }
  m.diagnostics["shift_constraint"] = D.constraint_residual;
  m.diagnostics["shift_unitarity"] = D.unitarity;

  double leak_max = 0, root_max = 0, rel_max = 0;
  for (std::int64_t n = 1; n <= w.j_max(); ++n) {
    const CMatrix& Qn = chain.block(n);
    const CMatrix& Qp = chain.block(n - 1);
    const CMatrix Y = detail::grouped_product(m.D, Qp, groups);
    const CMatrix E = Qn.adjoint() * Y;
    const double leak = induced_one_norm(Y - Qn * E);
    m.diagnostics[level_key(n, "leakage")] = leak;
    leak_max = std::max(leak_max, leak);
    if (!(leak <= opts.leakage_tol))
      throw AlphaRootFailure("D maps K_" + std::to_string(n - 1) + " outside K_" + std::to_string(n) +
                             " (leakage " + std::to_string(leak) + ")");
    if (E.rows() != E.cols())
      throw AlphaRootFailure("chain blocks K_" + std::to_string(n - 1) + " and K_" + std::to_string(n) +
                             " have different dimensions");
    const double eu = unitarity_error(E);
    m.diagnostics[level_key(n, "transfer_unitarity")] = eu;
    if (!(eu <= opts.leakage_tol))
      throw AlphaRootFailure("compressed shift on K_" + std::to_string(n) + " is not unitary");

    roots::RepresentationTable rho;
    rho.family = spec.family();
    for (const auto& g : m.generators) {
      const CMatrix& Tp = m.T_blocks[g][std::size_t(n - 1 - w.j_min())];
      rho.gens[g] = E * Tp * E.adjoint();
    }
    std::map<std::string, CMatrix> root;
    std::map<std::string, double> residuals;
    try {
      switch (spec.family()) {
        case group::Family::FreeAbelian: {
          auto t = roots::abelian_alpha_root(rho, spec.abelian().A, opts.seed);
          root = std::move(t.gens);
          residuals = std::move(t.relation_residuals);
          break;
        }
        case group::Family::Heisenberg: {
          const auto& h = spec.heis();
          auto hr = roots::heisenberg_alpha_root(rho.gens.at("t3"), rho.gens.at("t2"), rho.gens.at("t1"),
                                                 static_cast<std::int64_t>(h.a), static_cast<std::int64_t>(h.b));
          root["t1"] = hr.W;
          root["t2"] = hr.V;
          root["t3"] = hr.U;
          residuals["alpha_root[t1]"] = hr.r1;
          residuals["central[t1,t3]"] = hr.r2;
          residuals["central[t1,t2]"] = hr.r3;
          break;
        }
        case group::Family::FreeNilpotent: {
          auto t = roots::fn_alpha_root(rho, spec.nilpotent().exps);
          root = std::move(t.gens);
          residuals = std::move(t.relation_residuals);
          break;
        }
      }
    } catch (const AlphaRootFailure&) {
      throw;
    } catch (const NumericalFailure& e) {
      throw AlphaRootFailure("alpha-root on K_" + std::to_string(n) + ": " + e.what());
    } catch (const InvalidInput& e) {
      throw AlphaRootFailure("alpha-root on K_" + std::to_string(n) + ": " + e.what());
    }
    for (const auto& [k, v] : residuals) {
      m.diagnostics[level_key(n, "root." + k)] = v;
      const bool relation = k.rfind("alpha_root", 0) == 0 || k.rfind("power", 0) == 0;
      (relation ? root_max : rel_max) = std::max(relation ? root_max : rel_max, v);
    }
    for (const auto& g : m.generators) m.T_blocks[g].push_back(root.at(g));
  }
  m.diagnostics["leakage_max"] = leak_max;
  m.diagnostics["root_residual_max"] = root_max;
  m.diagnostics["root_relation_max"] = rel_max;

  for (const auto& g : m.generators) {
    const auto& bl = m.T_blocks[g];
    CMatrix T = CMatrix::Zero(Index(m.rank), Index(m.rank));
    for (std::size_t i = 0; i < bl.size(); ++i) {
      const CMatrix& Q = chain.blocks[i];
      if (Q.cols() == 0) continue;
      const CMatrix QB = Q * bl[i];
      T += detail::grouped_product(QB, Q.adjoint(), detail::contiguous_groups({std::size_t(Q.cols())}));
    }
    m.T[g] = std::move(T);
    m.diagnostics["unitarity[" + g + "]"] = unitarity_error(m.T[g]);
  }

  const std::size_t origin = w.index_of(0, group::identity(spec));
  if (origin == Window::npos) throw InvalidInput("window does not contain the point (0, e)");
  m.eta = model.V.col(Index(origin));
  return m;
}

}  // namespace dilatekit::dilation
