#include "dilatekit/report.hpp"

#include <cfloat>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "dilatekit/errors.hpp"

namespace dilatekit::report {

using nlohmann::json;

std::string comparison_name(Comparison c) {
  switch (c) {
    case Comparison::LessEqual: return "<=";
    case Comparison::GreaterEqual: return ">=";
    default: return "==";
  }
}

Comparison parse_comparison(const std::string& s) {
  if (s == "<=") return Comparison::LessEqual;
  if (s == ">=") return Comparison::GreaterEqual;
  if (s == "==") return Comparison::Equal;
  throw InvalidInput("unknown comparison '" + s + "'");
}

Check make_check(std::string name, double value, double tolerance, Comparison cmp) {
  Check c{std::move(name), value, tolerance, cmp, false};
  if (!std::isfinite(c.value)) {
    c.value = DBL_MAX;
    return c;
  }
  switch (cmp) {
    case Comparison::LessEqual: c.pass = c.value <= tolerance; break;
    case Comparison::GreaterEqual: c.pass = c.value >= tolerance; break;
    case Comparison::Equal: c.pass = c.value == tolerance; break;
  }
  return c;
}

bool Section::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

bool Report::pass() const {
  for (const auto& [_, s] : sections)
    if (!s.pass()) return false;
  return true;
}

std::string to_json(const Report& r) {
  json doc;
  doc["metadata"] = json::object();
  for (const auto& [k, v] : r.metadata) doc["metadata"][k] = v;
  doc["sections"] = json::object();
  for (const auto& [name, s] : r.sections) {
    json sec;
    sec["pass"] = s.pass();
    sec["checks"] = json::array();
    for (const auto& c : s.checks)
      sec["checks"].push_back({{"name", c.name},
                               {"value", c.value},
                               {"tolerance", c.tolerance},
                               {"comparison", comparison_name(c.comparison)},
                               {"pass", c.pass}});
    sec["info"] = json::object();
    for (const auto& [k, v] : s.info) sec["info"][k] = std::isfinite(v) ? v : DBL_MAX;
    sec["notes"] = json::object();
    for (const auto& [k, v] : s.notes) sec["notes"][k] = v;
    doc["sections"][name] = std::move(sec);
  }
  doc["pass"] = r.pass();
  return doc.dump(2) + "\n";
}

Report from_json(const std::string& text) try {
  const json doc = json::parse(text);
  Report r;
  for (const auto& [k, v] : doc.at("metadata").items()) r.metadata[k] = v.get<std::string>();
  for (const auto& [name, sec] : doc.at("sections").items()) {
    Section s;
    for (const auto& c : sec.at("checks"))
      s.checks.push_back({c.at("name").get<std::string>(), c.at("value").get<double>(), c.at("tolerance").get<double>(),
                          parse_comparison(c.at("comparison").get<std::string>()), c.at("pass").get<bool>()});
    for (const auto& [k, v] : sec.at("info").items()) s.info[k] = v.get<double>();
    for (const auto& [k, v] : sec.at("notes").items()) s.notes[k] = v.get<std::string>();
    r.sections[name] = std::move(s);
  }
  return r;
} catch (const json::exception& e) {
  throw InvalidInput(std::string("malformed report: ") + e.what());
}

void emit_report(const Report& r, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open report file " + path.string());
  out << to_json(r);
  if (!out) throw std::runtime_error("failed writing report file " + path.string());
}

Report load_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open report file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

}  // namespace dilatekit::report
