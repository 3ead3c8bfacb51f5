#include "dilatekit/config.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "dilatekit/errors.hpp"
#include "dilatekit/matrix_io.hpp"

namespace dilatekit::cli {

using nlohmann::json;

namespace {

group::Integer to_integer(const json& v) {
  if (v.is_number_integer()) return group::Integer(v.get<std::int64_t>());
  if (v.is_string()) return group::Integer(v.get<std::string>());
  throw InvalidInput("expected an integer, got " + v.dump());
}

std::string integer_list(const std::vector<group::Integer>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].str();
  return s;
}

group::MonomorphismSpec parse_group(const json& g, std::string& text) {
  const std::string family = g.at("family").get<std::string>();
  if (family == "bs12") {
    text = "BS(1,2): free_abelian A=[[2]]";
    return group::MonomorphismSpec::bs12();
  }
  if (family == "free_abelian") {
    group::IntMatrix A;
    std::string s;
    for (const auto& row : g.at("matrix")) {
      A.emplace_back();
      for (const auto& x : row) A.back().push_back(to_integer(x));
      s += (s.empty() ? "[" : ",[") + integer_list(A.back()) + "]";
    }
    text = "free_abelian A=[" + s + "]";
    return group::MonomorphismSpec::free_abelian(std::move(A));
  }
  if (family == "heisenberg") {
    auto a = to_integer(g.at("a")), b = to_integer(g.at("b"));
    text = "heisenberg a=" + a.str() + " b=" + b.str();
    return group::MonomorphismSpec::heisenberg(a, b);
  }
  if (family == "free_nilpotent") {
    std::vector<group::Integer> e;
    for (const auto& x : g.at("exps")) e.push_back(to_integer(x));
    text = "free_nilpotent exps=[" + integer_list(e) + "]";
    return group::MonomorphismSpec::free_nilpotent(std::move(e));
  }
  throw InvalidInput("unknown group family '" + family + "'");
}

// Uniform in [-1, 1) from the top 53 bits, independent of the standard
// library's distribution implementations.
double uniform_pm1(std::mt19937_64& rng) { return std::ldexp(double(rng() >> 11), -52) - 1.0; }

CVector parse_complex_vector(const json& v, int d) {
  CVector out = CVector::Zero(d);
  const auto& re = v.at("re");
  const json im = v.contains("im") ? v.at("im") : json::array();
  if (int(re.size()) != d || (!im.empty() && int(im.size()) != d)) throw InvalidInput("explicit vector has wrong length");
  for (int i = 0; i < d; ++i) out(i) = cd(re[i].get<double>(), im.empty() ? 0.0 : im[i].get<double>());
  return out;
}

frame::Grid2D gaussian_grid(const json& g) {
  frame::Grid2D f;
  f.x0 = g.at("x0").get<double>();
  f.y0 = g.at("y0").get<double>();
  f.dx = g.at("dx").get<double>();
  f.dy = g.at("dy").get<double>();
  f.nx = g.at("nx").get<int>();
  f.ny = g.at("ny").get<int>();
  const double sx = g.value("sigma_x", 1.0), sy = g.value("sigma_y", 1.0);
  const double cx = g.value("center_x", 0.0), cy = g.value("center_y", 0.0);
  if (f.nx <= 0 || f.ny <= 0 || !(f.dx > 0) || !(f.dy > 0) || !(sx > 0) || !(sy > 0))
    throw InvalidInput("gaussian generator grid is malformed");
  f.values.resize(std::size_t(f.nx) * std::size_t(f.ny));
  for (int iy = 0; iy < f.ny; ++iy)
    for (int ix = 0; ix < f.nx; ++ix) {
      const double u = (f.x(ix) - cx) / sx, v = (f.y(iy) - cy) / sy;
      f.values[std::size_t(iy) * std::size_t(f.nx) + std::size_t(ix)] = std::exp(-0.5 * (u * u + v * v));
    }
  return f;
}

frame::Grid2D file_grid(const json& g, const std::filesystem::path& base) {
  std::filesystem::path p = g.at("path").get<std::string>();
  if (p.is_relative()) p = base / p;
  const CMatrix M = read_dense(p);
  frame::Grid2D f;
  f.x0 = g.at("x0").get<double>();
  f.y0 = g.at("y0").get<double>();
  f.dx = g.at("dx").get<double>();
  f.dy = g.at("dy").get<double>();
  f.ny = int(M.rows());
  f.nx = int(M.cols());
  f.values.resize(std::size_t(M.size()));
  for (int iy = 0; iy < f.ny; ++iy)
    for (int ix = 0; ix < f.nx; ++ix) f.values[std::size_t(iy) * std::size_t(f.nx) + std::size_t(ix)] = M(iy, ix);
  return f;
}

frame::FrameSystemSpec parse_frame(const json& f, const group::Window& w, std::uint64_t seed,
                                   const std::filesystem::path& base, std::string& text) {
  const std::string kind = f.at("kind").get<std::string>();
  if (kind == "msf_dyadic") {
    std::vector<frame::Interval> pieces;
    for (const auto& iv : f.at("intervals")) {
      if (iv.size() != 2) throw InvalidInput("MSF interval needs two endpoints");
      auto endpoint = [](const json& e) { return frame::parse_rational(e.is_string() ? e.get<std::string>() : e.dump()); };
      pieces.push_back({endpoint(iv[0]), endpoint(iv[1])});
    }
    frame::MSFDyadic m{frame::IntervalSet(std::move(pieces))};
    text = "msf_dyadic E=" + m.E.to_string();
    return m;
  }
  if (kind == "explicit") {
    frame::ExplicitVectors e;
    const std::string source = f.value("source", "vectors");
    const auto& spec = w.spec();
    if (source == "vectors") {
      e.d = f.at("d").get<int>();
      for (const auto& item : f.at("vectors")) {
        const auto word = group::parse_word(spec, item.at("point").get<std::string>());
        const auto pt = group::lattice_from_word(spec, word);
        if (!pt) throw InvalidInput("explicit vector point is not of the form u^j gamma: " + item.at("point").dump());
        e.vecs.emplace_back(*pt, parse_complex_vector(item, e.d));
      }
    } else if (source == "random") {
      e.d = f.at("d").get<int>();
      const double scale = f.value("scale", 1.0);
      std::mt19937_64 rng(seed);
      for (std::size_t x = 0; x < w.size(); ++x) {
        CVector v(e.d);
        for (int i = 0; i < e.d; ++i) {
          const double re = uniform_pm1(rng), im = uniform_pm1(rng);
          v(i) = scale * cd(re, im);
        }
        e.vecs.emplace_back(w.point(x), v);
      }
    } else if (source == "orthonormal" || source == "zero") {
      e.d = source == "zero" ? 1 : int(w.size());
      for (std::size_t x = 0; x < w.size(); ++x) {
        CVector v = CVector::Zero(e.d);
        if (source == "orthonormal") v(Eigen::Index(x)) = 1.0;
        e.vecs.emplace_back(w.point(x), v);
      }
    } else {
      throw InvalidInput("unknown explicit source '" + source + "'");
    }
    text = "explicit source=" + source + " d=" + std::to_string(e.d);
    return e;
  }
  if (kind == "band_limited_2d") {
    const auto& rep = f.at("rep");
    const std::string preset = rep.at("preset").get<std::string>();
    frame::BandLimited2D b;
    if (preset == "shearlet") {
      b.rep = frame::ShearletRep{rep.value("a", 2)};
    } else if (preset == "heisenberg_mult1") {
      b.rep = frame::HeisenbergMult1Rep{rep.value("a", 2), rep.value("b", 2)};
    } else {
      throw InvalidInput("unknown representation preset '" + preset + "'");
    }
    const auto& g = f.at("generator");
    const std::string type = g.at("type").get<std::string>();
    if (type == "gaussian") {
      b.generator = gaussian_grid(g);
    } else if (type == "file") {
      b.generator = file_grid(g, base);
    } else {
      throw InvalidInput("unknown generator type '" + type + "'");
    }
    if (g.value("normalize", true)) {
      const double n = frame::grid_norm(b.rep, b.generator);
      if (!(n > 0)) throw InvalidInput("generator has zero norm");
      for (auto& v : b.generator.values) v /= n;
    }
    text = "band_limited_2d rep=" + frame::rep_name(b.rep) + " generator=" + type + " grid=" +
           std::to_string(b.generator.nx) + "x" + std::to_string(b.generator.ny);
    return b;
  }
  throw InvalidInput("unknown frame kind '" + kind + "'");
}

double positive(const json& t, const char* key, double dflt) {
  const double v = t.value(key, dflt);
  if (!(v > 0) || !std::isfinite(v)) throw InvalidInput(std::string("tolerance '") + key + "' must be positive");
  return v;
}

}  // namespace

group::Window RunConfig::window() const { return group::enumerate_window(*spec, j_min, j_max, radius); }

RunConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir,
                       std::optional<std::uint64_t> seed_override) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    RunConfig c;
    c.spec = parse_group(doc.at("group"), c.group_text);
    const auto& w = doc.at("window");
    c.j_min = w.at("j_min").get<std::int64_t>();
    c.j_max = w.at("j_max").get<std::int64_t>();
    c.radius = w.at("radius").get<std::int64_t>();
    if (c.j_min > 0 || c.j_max < 0 || c.radius < 0) throw InvalidInput("window must contain level 0 and have radius >= 0");
    if (doc.contains("core")) {
      c.core_j = doc["core"].value("j", c.core_j);
      c.core_radius = doc["core"].value("radius", c.core_radius);
    }
    c.seed = seed_override ? *seed_override : doc.value("seed", std::uint64_t(0));
    c.parseval_q_max = doc.value("parseval_q_max", c.parseval_q_max);
    if (doc.contains("tolerances")) {
      const auto& t = doc["tolerances"];
      c.tol.psd = positive(t, "psd", c.tol.psd);
      c.tol.rank = positive(t, "rank", c.tol.rank);
      c.tol.relation = positive(t, "relation", c.tol.relation);
      c.tol.factorization = positive(t, "factorization", c.tol.factorization);
      c.tol.operator_ = positive(t, "operator", c.tol.operator_);
      c.tol.unitary = positive(t, "unitary", c.tol.unitary);
      c.tol.leakage = positive(t, "leakage", c.tol.leakage);
      c.tol.dilation = positive(t, "dilation", c.tol.dilation);
      c.tol.hermitian = positive(t, "hermitian", c.tol.hermitian);
    }
    if (doc.contains("invariance_words")) {
      for (const auto& s : doc["invariance_words"]) c.invariance_words.push_back(s.get<std::string>());
    } else {
      c.invariance_words.push_back("u");
      for (const auto& g : c.spec->generator_names()) c.invariance_words.push_back(g);
      c.invariance_words.push_back("u^-1 t1 u");
    }
    for (const auto& s : c.invariance_words) (void)group::parse_word(*c.spec, s);
    c.frame = parse_frame(doc.at("frame"), c.window(), c.seed, base_dir, c.frame_text);
    return c;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
}

RunConfig load_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path(), seed_override);
}

}  // namespace dilatekit::cli
