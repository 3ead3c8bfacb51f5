// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.
// Tolerances are pinned here and do not come from any configuration.

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "dilatekit/config.hpp"
#include "dilatekit/dilation.hpp"
#include "dilatekit/frame.hpp"
#include "dilatekit/matrix_io.hpp"
#include "dilatekit/report.hpp"
#include "dilatekit/roots.hpp"
#include "frozen_values.hpp"
#include "group_properties.hpp"
#include "oracles/msf_quadrature.hpp"

namespace fs = std::filesystem;
using namespace dilatekit;
using group::Integer;

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kPsdTol = 1e-10;
constexpr double kKRelationTol = 1e-10;
constexpr double kQuadratureTol = 1e-8;
constexpr double kFactorizationTol = 1e-10;
constexpr double kOrthonormalTol = 1e-10;
constexpr double kConstraintTol = 1e-8;
constexpr double kUnitaryTol = 1e-10;
constexpr double kDilationTol = 1e-6;
constexpr double kRootTol = 1e-10;
constexpr double kAbelianTol = 1e-8;
constexpr double kTrivialLemmaTol = 1e-12;

const fs::path kPresets = DILATEKIT_PRESETS;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(DILATEKIT_BIN) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

double check_value(const report::Report& r, const std::string& section, const std::string& name) {
  for (const auto& c : r.sections.at(section).checks)
    if (c.name == name) return c.value;
  throw std::runtime_error("report lacks " + section + "." + name);
}

// Largest value among checks of a section whose name starts with prefix.
double max_check(const report::Report& r, const std::string& section, const std::string& prefix) {
  double v = -1;
  for (const auto& c : r.sections.at(section).checks)
    if (c.name.rfind(prefix, 0) == 0) v = std::max(v, c.value);
  if (v < 0) throw std::runtime_error("report lacks " + section + "." + prefix + "*");
  return v;
}

frame::IntervalSet symmetric(const char* a, const char* b) {
  return frame::IntervalSet::symmetric(frame::parse_rational(a), frame::parse_rational(b));
}

CMatrix random_unitary(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix Z(d, d);
  for (Eigen::Index i = 0; i < Z.size(); ++i) Z(i) = cd(g(rng), g(rng));
  return Eigen::HouseholderQR<CMatrix>(Z).householderQ();
}

// Two runs of the sub-Shannon preset, shared by several criteria.
struct SubShannonRuns {
  fs::path a, b;
  int exit_a = -1, exit_b = -1;
  report::Report rep;
};

SubShannonRuns& sub_shannon() {
  static SubShannonRuns runs = [] {
    SubShannonRuns s;
    const fs::path base = fs::temp_directory_path() / "dilatekit_acceptance";
    fs::remove_all(base);
    s.a = base / "run_a";
    s.b = base / "run_b";
    const std::string cfg = (kPresets / "bs12_sub_shannon.json").string();
    s.exit_a = run_cli("dilate --config " + cfg + " --out " + s.a.string());
    s.exit_b = run_cli("dilate --config " + cfg + " --out " + s.b.string());
    s.rep = report::load_report(s.a / "report.json");
    return s;
  }();
  return runs;
}

Outcome parseval_gate() {
  const auto E = symmetric("1/8", "1/4");
  const Integer dev = frame::calderon_check(E);
  const Integer orth = frame::translation_orthogonality_check(E, 64);
  const Integer bad = frame::calderon_check(symmetric("1/8", "3/16"));
  return {dev == 0 && orth == 0 && bad >= 1,
          "deviation=" + dev.str() + " orthogonality=" + orth.str() + " short_set_deviation=" + bad.str()};
}

Outcome gram_vs_quadrature() {
  const auto spec = group::MonomorphismSpec::bs12();
  const auto w = group::enumerate_window(spec, -2, 2, 4);
  const auto G = frame::gram_matrix(frame::MSFDyadic{symmetric("1/8", "1/4")}, w).G;
  const std::vector<fixtures::Piece> E = {{-0.25, -0.125}, {0.125, 0.25}};
  double worst = 0;
  for (std::size_t x = 0; x < w.size(); ++x)
    for (std::size_t y = 0; y < w.size(); ++y) {
      const auto p = w.point(x), q = w.point(y);
      const long k = long(group::exponents(p.gamma)[0]), kq = long(group::exponents(q.gamma)[0]);
      const cd ref = fixtures::msf_quadrature(E, int(p.j), k, int(q.j), kq);
      worst = std::max(worst, std::abs(G(Eigen::Index(x), Eigen::Index(y)) - ref));
    }
  const auto i0 = w.index_of(0, group::identity(spec));
  const auto i1 = w.index_of(0, group::from_exponents(spec, {Integer(1)}));
  const double entry_err = std::abs(G(Eigen::Index(i0), Eigen::Index(i1)) - cd((1 - std::sqrt(2.0) / 2) / std::numbers::pi));
  return {worst <= kQuadratureTol && entry_err <= kQuadratureTol,
          "max_quadrature_diff=" + fmt(worst) + " closed_form_entry_diff=" + fmt(entry_err)};
}

Outcome kernel_certification() {
  const auto& r = sub_shannon().rep;
  const double herm = check_value(r, "k_relations", "hermitian");
  const double mn = check_value(r, "psd", "min_eigenvalue");
  const double sh = check_value(r, "k_relations", "shift_relation");
  const double tr = check_value(r, "k_relations", "translation_relation");
  const double frac = r.sections.at("k_relations").info.at("checkable_fraction");
  return {herm <= kHermitianTol && mn >= -kPsdTol && sh <= kKRelationTol && tr <= kKRelationTol && frac > 0,
          "hermitian=" + fmt(herm) + " min_eig=" + fmt(mn) + " shift=" + fmt(sh) + " translation=" + fmt(tr) +
              " checkable_fraction=" + fmt(frac)};
}

Outcome factorization() {
  // Recompute max |K - V*V| from the saved factor and a fresh Gram matrix.
  const auto cfg = cli::load_config(kPresets / "bs12_sub_shannon.json");
  const auto w = cfg.window();
  const auto K = dilation::complement_kernel(frame::gram_matrix(cfg.frame, w)).K;
  const CMatrix V = read_dense(sub_shannon().a / "model" / "V.txt");
  const double resid = (K - V.adjoint() * V).cwiseAbs().maxCoeff();

  const auto sh = dilation::kolmogorov_factorize(
      dilation::complement_kernel(frame::gram_matrix(frame::MSFDyadic{symmetric("1/2", "1")}, w)), cfg.tol.rank, kPsdTol);

  const auto wi = group::enumerate_window(w.spec(), -1, 1, 4);
  frame::ExplicitVectors zero;
  zero.d = 1;
  for (std::size_t i = 0; i < wi.size(); ++i) zero.vecs.push_back({wi.point(i), CVector::Zero(1)});
  const auto id = dilation::kolmogorov_factorize(dilation::complement_kernel(frame::gram_matrix(zero, wi)), 1e-10, kPsdTol);
  const double orth = (id.V.adjoint() * id.V - CMatrix::Identity(id.V.cols(), id.V.cols())).cwiseAbs().maxCoeff();
  return {resid <= kFactorizationTol && sh.rank == 0 && orth <= kOrthonormalTol && id.rank == wi.size(),
          "max|K-V*V|=" + fmt(resid) + " zero_kernel_rank=" + std::to_string(sh.rank) + " identity_orthonormality=" + fmt(orth)};
}

Outcome operator_construction() {
  const auto& r = sub_shannon().rep;
  const double d = check_value(r, "operator_residuals", "shift_constraint");
  const double t0 = max_check(r, "operator_residuals", "t0_constraint[");
  const double du = check_value(r, "operator_residuals", "shift_unitarity");
  const double tu = std::max(max_check(r, "operator_residuals", "unitarity["), max_check(r, "operator_residuals", "t0_unitarity["));
  return {d <= kConstraintTol && t0 <= kConstraintTol && du <= kUnitaryTol && tu <= kUnitaryTol,
          "D_constraint=" + fmt(d) + " T0_constraint=" + fmt(t0) + " D_unitarity=" + fmt(du) + " T_unitarity=" + fmt(tu)};
}

Outcome end_to_end() {
  const auto& r = sub_shannon().rep;
  const double rec = check_value(r, "dilation_certification", "reconstruction");
  const double gram = check_value(r, "dilation_certification", "dilated_gram");
  const double rel = check_value(r, "dilation_certification", "relation_defined_blocks");
  const fs::path out = fs::temp_directory_path() / "dilatekit_acceptance" / "shannon";
  const int code = run_cli("dilate --config " + (kPresets / "shannon.json").string() + " --out " + out.string());
  const auto sr = report::load_report(out / "report.json");
  const double srank = sr.sections.at("factorization").info.at("rank");
  const double sgram = check_value(sr, "dilation_certification", "dilated_gram");
  return {sub_shannon().exit_a == 0 && rec <= kDilationTol && gram <= kDilationTol && rel <= kDilationTol && code == 0 &&
              srank == 0 && sgram == 0,
          "exit=" + std::to_string(sub_shannon().exit_a) + " reconstruction=" + fmt(rec) + " dilated_gram=" + fmt(gram) +
              " relation=" + fmt(rel) + " shannon_exit=" + std::to_string(code) + " shannon_rank=" + fmt(srank) +
              " shannon_gram=" + fmt(sgram)};
}

Outcome roots_criterion() {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> dim(1, 64), pw(2, 8);
  double round_trip = 0;
  for (int i = 0; i < 100; ++i) {
    const int d = dim(rng), a = pw(rng);
    const CMatrix U = random_unitary(d, rng);
    round_trip = std::max(round_trip, induced_one_norm(unitary_power(roots::principal_root(U, a), Integer(a)) - U));
  }

  const group::IntMatrix A = {{Integer(2), Integer(1)}, {Integer(0), Integer(2)}};
  const auto spec = group::MonomorphismSpec::free_abelian(A);
  double abelian = 0;
  std::uniform_real_distribution<double> ph(-std::numbers::pi, std::numbers::pi);
  for (int trial = 0; trial < 5; ++trial) {
    const CMatrix Q = random_unitary(16, rng);
    roots::RepresentationTable rho;
    for (const char* g : {"t1", "t2"}) {
      CVector z(16);
      for (auto& v : z) v = std::polar(1.0, ph(rng));
      rho.gens[g] = Q * z.asDiagonal() * Q.adjoint();
    }
    const auto T = roots::abelian_alpha_root(rho, A, 3);
    for (std::size_t g = 0; g < 2; ++g) {
      CMatrix img = CMatrix::Identity(16, 16);
      for (const auto& [i, e] : group::alpha_of_generator(spec, g))
        img = img * unitary_power(T.gens.at(spec.generator_names()[i]), e);
      abelian = std::max(abelian, induced_one_norm(img - rho.gens.at(spec.generator_names()[g])));
    }
  }

  const auto h = roots::finite_heisenberg_rep(8);
  const auto hr = roots::heisenberg_alpha_root(h.T, h.M, h.C, 1, 1);
  const double trivial = std::max({hr.r1, hr.r2, hr.r3});
  return {round_trip <= kRootTol && abelian <= kAbelianTol && trivial <= kTrivialLemmaTol,
          "principal_round_trip=" + fmt(round_trip) + " abelian=" + fmt(abelian) + " a=b=1_lemma=" + fmt(trivial)};
}

Outcome heisenberg_lemma() {
  double worst = 0;
  std::string vals;
  for (const auto& ref : fixtures::kHeisenbergLemmaA2B2) {
    const auto h = roots::finite_heisenberg_rep(ref.N);
    const auto r = roots::heisenberg_alpha_root(h.T, h.M, h.C, 2, 2);
    worst = std::max({worst, std::abs(r.r1 - ref.r1), std::abs(r.r2 - ref.r2), std::abs(r.r3 - ref.r3)});
    vals += " N=" + std::to_string(ref.N) + ":(" + fmt(r.r1) + "," + fmt(r.r2) + "," + fmt(r.r3) + ")";
  }
  return {worst <= fixtures::kLemmaTol, "max_diff_to_frozen=" + fmt(worst) + vals};
}

Outcome group_algebra() {
  const auto t = fixtures::run_group_properties(1000, 97);
  std::string failed;
  for (const auto& [name, c] : t.failures)
    if (c) failed += " " + name + "=" + std::to_string(c);
  return {t.cases == 1000 && t.total_failures() == 0,
          "cases=" + std::to_string(t.cases) + " failures=" + std::to_string(t.total_failures()) + failed};
}

Outcome reproducibility() {
  const auto& s = sub_shannon();
  const std::string a = slurp(s.a / "report.json"), b = slurp(s.b / "report.json");
  return {!a.empty() && a == b, "bytes=" + std::to_string(a.size()) + (a == b ? " identical" : " differ")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 parseval gate", parseval_gate},
      {"2 analytic gram vs quadrature", gram_vs_quadrature},
      {"3 kernel certification", kernel_certification},
      {"4 factorization", factorization},
      {"5 operator construction", operator_construction},
      {"6 end-to-end dilation", end_to_end},
      {"7 roots", roots_criterion},
      {"8 heisenberg lemma regression", heisenberg_lemma},
      {"9 group algebra", group_algebra},
      {"10 reproducibility", reproducibility},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
