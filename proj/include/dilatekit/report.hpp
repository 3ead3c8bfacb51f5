#pragma once

// Residual certification: invariance sampling, relation residuals and the
// JSON report.

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "dilatekit/dilation.hpp"
#include "dilatekit/group.hpp"

namespace dilatekit::report {

enum class Comparison { LessEqual, GreaterEqual, Equal };

std::string comparison_name(Comparison c);
Comparison parse_comparison(const std::string& s);

struct Check {
  std::string name;
  double value = 0;
  double tolerance = 0;
  Comparison comparison = Comparison::LessEqual;
  bool pass = false;

  bool operator==(const Check&) const = default;
};

/// Builds a check; non-finite values are stored as the largest double and fail.
Check make_check(std::string name, double value, double tolerance, Comparison cmp = Comparison::LessEqual);

struct Section {
  std::vector<Check> checks;
  /// Free-form numbers (counts, ranks, fractions) that carry no verdict.
  std::map<std::string, double> info;
  /// Free-form text (error messages, descriptions).
  std::map<std::string, std::string> notes;

  bool pass() const;
  bool operator==(const Section&) const = default;
};

inline const std::vector<std::string>& section_names() {
  static const std::vector<std::string> names = {"input_summary", "parseval_checks",    "k_relations",
                                                 "psd",           "factorization",      "operator_residuals",
                                                 "root_residuals", "dilation_certification"};
  return names;
}

struct Report {
  std::map<std::string, std::string> metadata;
  std::map<std::string, Section> sections;

  Section& section(const std::string& name) { return sections[name]; }
  bool pass() const;
  bool operator==(const Report&) const = default;
};

/// Stable JSON text: sorted keys, round-trip precision, trailing newline.
std::string to_json(const Report& r);
Report from_json(const std::string& text);
/// Writes to_json(r); throws std::runtime_error with the path on I/O failure.
void emit_report(const Report& r, const std::filesystem::path& path);
Report load_report(const std::filesystem::path& path);

struct InvarianceResult {
  double residual = 0;
  std::size_t sampled = 0;
  std::size_t skipped = 0;
};

/// Whether tau(u^-m gamma u^n) eta is evaluated on constrained spans only:
/// n <= j_max, n - m >= j_min, and for n = 0 every intermediate point of the
/// T0 path from (0, e) to (0, gamma) lies in the window.
bool evaluable(const dilation::DilationModel& m, const group::GroupWord& w);

/// max |K_tau(s x, s y) - K_tau(x, y)| over the given words s and point pairs;
/// pairs with a non-evaluable word are skipped and counted.
InvarianceResult invariance_sample(const dilation::DilationModel& m, const std::vector<group::GroupWord>& words,
                                   const std::vector<std::pair<group::LatticePoint, group::LatticePoint>>& pairs);

struct RelationResiduals {
  /// "shift[g]": max over n = 1..j_max-1 of ||(D T(g) D^* - T(alpha(g))) Q_n||.
  std::map<std::string, double> blocks;
  /// "shift_h0[g]": max ||(D T(g) D^* - T(alpha(g))) v(x)||_2 over x in H0 whose
  /// path stays constrained; counts under "sampled[g]" / "skipped[g]".
  std::map<std::string, double> h0;
  std::map<std::string, std::size_t> sampled, skipped;
  /// Gamma0 relations of T itself.
  std::map<std::string, double> gamma0;
  double max_defined() const;
};

RelationResiduals relation_residuals(const dilation::DilationModel& m);

}  // namespace dilatekit::report
