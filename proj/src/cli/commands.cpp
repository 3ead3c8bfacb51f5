#include "dilatekit/commands.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "dilatekit/errors.hpp"
#include "dilatekit/kernels.hpp"
#include "dilatekit/matrix_io.hpp"
#include "dilatekit/roots.hpp"

namespace dilatekit::cli {

using nlohmann::json;
using report::Comparison;
using report::make_check;
using report::Report;
using report::Section;

namespace {

std::string num(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

constexpr const char* kNorm = "induced 1-norm (max column sum of |entries|); vector residuals in the 2-norm";

Report roots_report(const RootsArgs& a) {
  Report r;
  r.metadata["command"] = "roots " + a.mode;
  r.metadata["norm"] = kNorm;
  r.metadata["seed"] = std::to_string(a.seed);
  r.metadata["version"] = kVersion;
  return r;
}

void parseval_section(const RunConfig& cfg, Section& s) {
  const auto* msf = std::get_if<frame::MSFDyadic>(&cfg.frame);
  if (!msf) {
    s.notes["status"] = "not applicable to " + frame::kind_name(cfg.frame) + " systems";
    return;
  }
  const auto dev = frame::calderon_check(msf->E);
  const auto tq = frame::translation_orthogonality_check(msf->E, cfg.parseval_q_max);
  s.checks.push_back(make_check("calderon_deviation", static_cast<double>(dev), 0.0, Comparison::Equal));
  s.checks.push_back(make_check("translation_orthogonality", static_cast<double>(tq), 0.0, Comparison::Equal));
  s.info["q_max"] = double(cfg.parseval_q_max);
  s.notes["E"] = msf->E.to_string();
}

void abort_section(Section& s, const std::string& what, const std::exception& e) {
  s.checks.push_back(make_check(what, 1.0, 0.0));
  s.notes["error"] = e.what();
}

void skipped(Report& r, std::initializer_list<const char*> names, const std::string& why) {
  for (const char* n : names) r.section(n).notes["status"] = "skipped: " + why;
}

report::InvarianceResult core_invariance(const RunConfig& cfg, const dilation::DilationModel& m) {
  const auto& spec = *cfg.spec;
  const auto w = m.window;
  std::vector<group::LatticePoint> core;
  for (std::size_t x = 0; x < w.size(); ++x) {
    const auto p = w.point(x);
    if (p.j < -cfg.core_j || p.j > cfg.core_j) continue;
    bool inside = true;
    for (const auto& e : group::exponents(p.gamma))
      if (e > cfg.core_radius || e < -cfg.core_radius) inside = false;
    if (inside) core.push_back(p);
  }
  std::vector<std::pair<group::LatticePoint, group::LatticePoint>> pairs;
  for (const auto& x : core)
    for (const auto& y : core) pairs.emplace_back(x, y);
  std::vector<group::GroupWord> words;
  for (const auto& s : cfg.invariance_words) words.push_back(group::parse_word(spec, s));
  return report::invariance_sample(m, words, pairs);
}

// Residual sections shared by dilate and verify.
void certify(const RunConfig& cfg, const frame::GramMatrix& gram, const dilation::DilationModel& m, Report& rep) {
  const auto& tol = cfg.tol;
  auto& ops = rep.section("operator_residuals");
  if (m.rank) {
    ops.checks.push_back(make_check("shift_unitarity", unitarity_error(m.D), tol.unitary));
    for (const auto& g : m.generators)
      ops.checks.push_back(make_check("unitarity[" + g + "]", unitarity_error(m.T.at(g)), tol.unitary));
  }
  const auto rel = report::relation_residuals(m);
  for (const auto& [k, v] : rel.blocks) ops.checks.push_back(make_check("relation." + k, v, tol.dilation));
  for (const auto& [k, v] : rel.h0) ops.checks.push_back(make_check("relation." + k, v, tol.dilation));
  for (const auto& [k, v] : rel.gamma0) ops.checks.push_back(make_check("gamma0." + k, v, tol.operator_));
  for (const auto& [g, n] : rel.sampled) ops.info["relation_h0_sampled[" + g + "]"] = double(n);
  for (const auto& [g, n] : rel.skipped) ops.info["relation_h0_skipped[" + g + "]"] = double(n);

  auto& dc = rep.section("dilation_certification");
  const auto d = dilation::assemble_dilation(gram, m, cfg.core_j, cfg.core_radius);
  dc.info["core_points"] = double(d.core_points);
  dc.checks.push_back(make_check("reconstruction", d.reconstruction, tol.dilation));
  dc.checks.push_back(make_check("dilated_gram", d.dilated_gram, tol.dilation));
  dc.checks.push_back(make_check("kernel_match", d.kernel_match, tol.dilation));
  dc.checks.push_back(make_check("projection_identity", d.projection_identity, tol.hermitian));
  dc.checks.push_back(make_check("relation_defined_blocks", rel.max_defined(), tol.dilation));
  const auto inv = core_invariance(cfg, m);
  dc.checks.push_back(make_check("invariance", inv.residual, tol.dilation));
  dc.checks.push_back(make_check("invariance_sampled", double(inv.sampled), 1.0, Comparison::GreaterEqual));
  dc.info["invariance_skipped"] = double(inv.skipped);
  dc.info["rank"] = double(m.rank);
}

void write_json(const json& j, const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << j.dump(2) << "\n";
}

std::vector<int> bits(const std::vector<bool>& v) { return {v.begin(), v.end()}; }

std::vector<bool> unbits(const json& j) {
  std::vector<bool> v;
  for (const auto& x : j) v.push_back(x.get<int>() != 0);
  return v;
}

}  // namespace

Report base_report(const std::string& command, const RunConfig& cfg) {
  Report r;
  r.metadata["command"] = command;
  r.metadata["group"] = cfg.group_text;
  r.metadata["frame"] = cfg.frame_text;
  r.metadata["window"] = "j in [" + std::to_string(cfg.j_min) + ", " + std::to_string(cfg.j_max) +
                         "], radius " + std::to_string(cfg.radius);
  r.metadata["core"] = "|j| <= " + std::to_string(cfg.core_j) + ", radius " + std::to_string(cfg.core_radius);
  r.metadata["seed"] = std::to_string(cfg.seed);
  r.metadata["norm"] = kNorm;
  r.metadata["version"] = kVersion;
  r.metadata["simd"] = simd::isa_name(simd::active_isa());
  const auto& t = cfg.tol;
  r.metadata["tolerance.dilation"] = num(t.dilation);
  r.metadata["tolerance.factorization"] = num(t.factorization);
  r.metadata["tolerance.hermitian"] = num(t.hermitian);
  r.metadata["tolerance.leakage"] = num(t.leakage);
  r.metadata["tolerance.operator"] = num(t.operator_);
  r.metadata["tolerance.psd"] = num(t.psd);
  r.metadata["tolerance.rank"] = num(t.rank);
  r.metadata["tolerance.relation"] = num(t.relation);
  r.metadata["tolerance.unitary"] = num(t.unitary);
  return r;
}

int finish(const Report& r, const CommandOptions& opts) {
  if (opts.out.empty()) {
    std::cout << report::to_json(r);
  } else {
    std::filesystem::create_directories(opts.out);
    report::emit_report(r, opts.out / "report.json");
  }
  for (const auto& [name, s] : r.sections)
    for (const auto& c : s.checks)
      if (!c.pass) spdlog::warn("check failed: {}.{} = {} (tolerance {} {})", name, c.name, c.value,
                                report::comparison_name(c.comparison), c.tolerance);
  return r.pass() ? kPass : kCheckFailed;
}

int cmd_parseval(const RunConfig& cfg, const CommandOptions& opts) {
  if (!std::holds_alternative<frame::MSFDyadic>(cfg.frame)) throw InvalidInput("parseval needs an msf_dyadic frame");
  Report rep = base_report("parseval", cfg);
  parseval_section(cfg, rep.section("parseval_checks"));
  return finish(rep, opts);
}

int cmd_gram(const RunConfig& cfg, const CommandOptions& opts) {
  Report rep = base_report("gram", cfg);
  const auto w = cfg.window();
  spdlog::info("gram: {} window points", w.size());
  const auto gram = frame::gram_matrix(cfg.frame, w, {opts.parallel, 0});
  auto& in = rep.section("input_summary");
  in.info["window_points"] = double(w.size());
  in.checks.push_back(make_check("gram_hermitian", hermitian_error(gram.G), cfg.tol.hermitian));
  in.info["gram_max_abs"] = max_abs(gram.G);
  if (!opts.out.empty()) {
    std::filesystem::create_directories(opts.out);
    write_dense(opts.out / "gram.txt", gram.G);
  }
  return finish(rep, opts);
}

int cmd_dilate(const RunConfig& cfg, const CommandOptions& opts) {
  const auto& tol = cfg.tol;
  Report rep = base_report("dilate", cfg);
  const auto w = cfg.window();
  auto& in = rep.section("input_summary");
  in.info["window_points"] = double(w.size());
  in.info["levels"] = double(w.levels());
  in.info["gammas_per_level"] = double(w.gammas_per_level());
  in.notes["frame_kind"] = frame::kind_name(cfg.frame);

  parseval_section(cfg, rep.section("parseval_checks"));

  spdlog::info("dilate: Gram matrix over {} points", w.size());
  const auto gram = frame::gram_matrix(cfg.frame, w, {opts.parallel, 0});
  const auto K = dilation::complement_kernel(gram);

  auto& kr = rep.section("k_relations");
  kr.checks.push_back(make_check("hermitian", hermitian_error(K.K), tol.hermitian));
  const auto rel = dilation::check_k_relations(K, *cfg.spec);
  kr.checks.push_back(make_check("shift_relation", rel.shift_residual, tol.relation));
  kr.checks.push_back(make_check("translation_relation", rel.translation_residual, tol.relation));
  kr.checks.push_back(make_check("checkable_pairs", double(rel.shift_checked + rel.translation_checked), 1.0,
                                 Comparison::GreaterEqual));
  kr.info["checkable_fraction"] = rel.checkable_fraction();
  kr.info["shift_checked"] = double(rel.shift_checked);
  kr.info["shift_total"] = double(rel.shift_total);
  kr.info["translation_checked"] = double(rel.translation_checked);
  kr.info["translation_total"] = double(rel.translation_total);

  auto& psd = rep.section("psd");
  const double mn = dilation::psd_check(K);
  psd.checks.push_back(make_check("min_eigenvalue", mn, -tol.psd, Comparison::GreaterEqual));

  spdlog::info("dilate: Kolmogorov factorization");
  dilation::KolmogorovModel km;
  try {
    km = dilation::kolmogorov_factorize(K, tol.rank, tol.psd);
  } catch (const IndefiniteKernel& e) {
    psd.notes["error"] = e.what();
    skipped(rep, {"factorization", "operator_residuals", "root_residuals", "dilation_certification"},
            "complement kernel is indefinite");
    return finish(rep, opts);
  }
  auto& fz = rep.section("factorization");
  fz.checks.push_back(make_check("kernel_residual", km.residual, tol.factorization));
  fz.info["rank"] = double(km.rank);
  fz.info["lambda_max"] = km.lambda_max;
  fz.info["lambda_min_kept"] = km.lambda_min_kept;
  fz.info["components"] = double(km.components.size());
  spdlog::info("dilate: rank {} of {}", km.rank, w.size());

  dilation::DilationModel model;
  if (km.rank == 0) {
    model = dilation::trivial_model(km);
    rep.section("root_residuals").notes["status"] = "trivial dilation (r = 0)";
  } else {
    auto& ops = rep.section("operator_residuals");
    dilation::SubspaceChain chain;
    dilation::ShiftOperator shift;
    dilation::TranslationZero t0;
    try {
      chain = dilation::subspace_chain(km);
      fz.checks.push_back(make_check("chain_orthogonality", chain.orthogonality_error(), tol.unitary));
      for (std::int64_t n = chain.j_min; n <= chain.j_max; ++n) fz.info["chain_dim[n=" + std::to_string(n) + "]"] = double(chain.dim(n));
      spdlog::info("dilate: shift operator");
      shift = dilation::build_shift(km, {tol.operator_});
      spdlog::info("dilate: translations on H0");
      t0 = dilation::build_T0(km, chain, {tol.operator_});
    } catch (const RelationViolation& e) {
      abort_section(ops, "constraints_consistent", e);
      skipped(rep, {"root_residuals", "dilation_certification"}, "operator construction failed");
      return finish(rep, opts);
    }
    ops.checks.push_back(make_check("shift_constraint", shift.constraint_residual, tol.operator_));
    ops.checks.push_back(make_check("shift_consistency", shift.consistency, tol.operator_));
    ops.info["shift_constrained_rank"] = double(shift.constrained_rank);
    for (const auto& g : t0.generators) {
      ops.checks.push_back(make_check("t0_constraint[" + g + "]", t0.constraint_residual.at(g), tol.operator_));
      ops.checks.push_back(make_check("t0_consistency[" + g + "]", t0.consistency.at(g), tol.operator_));
      ops.checks.push_back(make_check("t0_unitarity[" + g + "]", t0.unitarity.at(g), tol.unitary));
    }
    auto& rr = rep.section("root_residuals");
    try {
      spdlog::info("dilate: iterated alpha-roots");
      model = dilation::build_tau(km, chain, shift, t0, {tol.leakage, tol.operator_, cfg.seed});
    } catch (const AlphaRootFailure& e) {
      abort_section(rr, "alpha_roots", e);
      skipped(rep, {"dilation_certification"}, "alpha-root construction failed");
      return finish(rep, opts);
    }
    for (const auto& [k, v] : model.diagnostics) {
      if (k.rfind("leakage[", 0) == 0 || k.rfind("transfer_unitarity[", 0) == 0)
        rr.checks.push_back(make_check(k, v, tol.leakage));
      else if (k.rfind("root.", 0) == 0)
        rr.checks.push_back(make_check(k, v, tol.operator_));
    }
  }

  spdlog::info("dilate: certification");
  certify(cfg, gram, model, rep);
  if (!opts.out.empty()) save_model(model, opts.out / "model");
  return finish(rep, opts);
}

int cmd_verify(const RunConfig& cfg, const std::filesystem::path& model_dir, const CommandOptions& opts) {
  Report rep = base_report("verify", cfg);
  const auto w = cfg.window();
  const auto model = load_model(w, model_dir);
  rep.section("input_summary").info["rank"] = double(model.rank);
  rep.section("input_summary").notes["model"] = model_dir.string();
  const auto gram = frame::gram_matrix(cfg.frame, w, {opts.parallel, 0});
  certify(cfg, gram, model, rep);
  return finish(rep, opts);
}

int cmd_roots(const RootsArgs& a, const CommandOptions& opts) {
  Report rep = roots_report(a);
  auto& s = rep.section("root_residuals");
  auto out_file = [&](const std::string& name, const CMatrix& M) {
    if (opts.out.empty()) return;
    std::filesystem::create_directories(opts.out);
    write_dense(opts.out / name, M);
  };
  auto need = [&](std::size_t n) {
    if (a.inputs.size() != n) throw InvalidInput("roots " + a.mode + " needs " + std::to_string(n) + " input matrices");
  };
  if (a.mode == "principal") {
    need(1);
    const CMatrix U = read_dense(a.inputs[0]);
    roots::require_unitary(U, roots::kUnitaryTol, "input");
    if (a.power < 1) throw InvalidInput("power must be >= 1");
    const CMatrix S = roots::principal_root(U, a.power, a.offsets);
    s.checks.push_back(make_check("round_trip", induced_one_norm(unitary_power(S, a.power) - U), 1e-10));
    s.checks.push_back(make_check("unitarity", unitarity_error(S), 1e-10));
    out_file("S.txt", S);
  } else if (a.mode == "abelian") {
    group::IntMatrix A;
    try {
      for (const auto& row : json::parse(a.matrix_A)) {
        A.emplace_back();
        for (const auto& x : row) A.back().push_back(group::Integer(x.get<std::int64_t>()));
      }
    } catch (const json::exception& e) {
      throw InvalidInput(std::string("--A must be a JSON integer matrix: ") + e.what());
    }
    const auto spec = group::MonomorphismSpec::free_abelian(A);
    need(spec.rank());
    roots::RepresentationTable rho;
    const auto names = spec.generator_names();
    for (std::size_t i = 0; i < names.size(); ++i) rho.gens[names[i]] = read_dense(a.inputs[i]);
    const auto T = roots::abelian_alpha_root(rho, A, a.seed);
    for (const auto& [k, v] : T.relation_residuals) s.checks.push_back(make_check(k, v, roots::kRelationTol));
    for (const auto& [g, M] : T.gens) out_file("T_" + g + ".txt", M);
  } else if (a.mode == "heisenberg" || a.mode == "finite-heisenberg") {
    CMatrix A, B, C;
    if (a.mode == "heisenberg") {
      need(3);
      A = read_dense(a.inputs[0]);
      B = read_dense(a.inputs[1]);
      C = read_dense(a.inputs[2]);
    } else {
      if (a.N < 1) throw InvalidInput("N must be >= 1");
      const auto rep_n = roots::finite_heisenberg_rep(int(a.N));
      A = rep_n.T;
      B = rep_n.M;
      C = rep_n.C;
      s.info["N"] = double(a.N);
    }
    if (a.a < 1 || a.b < 1) throw InvalidInput("a and b must be >= 1");
    const auto h = roots::heisenberg_alpha_root(A, B, C, a.a, a.b);
    s.info["r1"] = h.r1;
    s.info["r2"] = h.r2;
    s.info["r3"] = h.r3;
    s.notes["lemma"] = "r1 = ||W^ab - C||, r2 = ||UW - WU||, r3 = ||VW - WV||; reported, not asserted";
    s.checks.push_back(make_check("unitarity[U]", unitarity_error(h.U), 1e-10));
    s.checks.push_back(make_check("unitarity[V]", unitarity_error(h.V), 1e-10));
    out_file("U.txt", h.U);
    out_file("V.txt", h.V);
    out_file("W.txt", h.W);
  } else {
    throw InvalidInput("unknown roots mode '" + a.mode + "'");
  }
  return finish(rep, opts);
}

void save_model(const dilation::DilationModel& m, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  json meta;
  meta["rank"] = m.rank;
  meta["generators"] = m.generators;
  meta["j_min"] = m.window.j_min();
  meta["j_max"] = m.window.j_max();
  meta["radius"] = m.window.radius();
  std::vector<std::size_t> dims;
  for (const auto& b : m.chain.blocks) dims.push_back(std::size_t(b.cols()));
  meta["chain_dims"] = dims;
  meta["shift_mask"] = bits(m.shift_mask);
  meta["t0_mask"] = json::object();
  for (const auto& [g, mk] : m.t0_mask) meta["t0_mask"][g] = bits(mk);
  write_json(meta, dir / "meta.json");
  write_dense(dir / "V.txt", m.V);
  write_dense(dir / "D.txt", m.D);
  write_dense(dir / "eta.txt", CMatrix(m.eta));
  write_dense(dir / "chain.txt", m.chain.basis());
  for (const auto& [g, T] : m.T) write_dense(dir / ("T_" + g + ".txt"), T);
}

dilation::DilationModel load_model(const group::Window& window, const std::filesystem::path& dir) {
  std::ifstream in(dir / "meta.json", std::ios::binary);
  if (!in) throw InvalidInput("no model at " + dir.string());
  json meta;
  try {
    meta = json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInput("model meta.json: " + std::string(e.what()));
  }
  dilation::DilationModel m;
  m.window = window;
  if (meta.at("j_min").get<std::int64_t>() != window.j_min() || meta.at("j_max").get<std::int64_t>() != window.j_max() ||
      meta.at("radius").get<std::int64_t>() != window.radius())
    throw InvalidInput("model window differs from the config window");
  m.rank = meta.at("rank").get<std::size_t>();
  m.generators = meta.at("generators").get<std::vector<std::string>>();
  m.shift_mask = unbits(meta.at("shift_mask"));
  for (const auto& [g, v] : meta.at("t0_mask").items()) m.t0_mask[g] = unbits(v);
  m.V = read_dense(dir / "V.txt");
  m.D = read_dense(dir / "D.txt");
  const CMatrix eta = read_dense(dir / "eta.txt");
  m.eta = eta.size() ? CVector(eta.col(0)) : CVector(0);
  const CMatrix Q = read_dense(dir / "chain.txt");
  m.chain.j_min = window.j_min();
  m.chain.j_max = window.j_max();
  Eigen::Index at = 0;
  for (const auto d : meta.at("chain_dims").get<std::vector<std::size_t>>()) {
    m.chain.blocks.push_back(d ? CMatrix(Q.middleCols(at, Eigen::Index(d))) : CMatrix(Eigen::Index(m.rank), 0));
    at += Eigen::Index(d);
  }
  for (const auto& g : m.generators) m.T[g] = read_dense(dir / ("T_" + g + ".txt"));
  const auto r = Eigen::Index(m.rank);
  if (m.V.rows() != r || std::size_t(m.V.cols()) != window.size() || m.D.rows() != r || m.eta.size() != r ||
      at != r || m.shift_mask.size() != window.size())
    throw InvalidInput("model files have inconsistent dimensions");
  return m;
}

}  // namespace dilatekit::cli
