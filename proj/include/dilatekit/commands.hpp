#pragma once

// Subcommands behind the dilatekit executable. Each returns the process exit
// code: 0 every check passed, 1 some check failed, 2 invalid input,
// 3 internal numerical failure.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dilatekit/config.hpp"
#include "dilatekit/dilation.hpp"
#include "dilatekit/report.hpp"

namespace dilatekit::cli {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kInvalidInput = 2, kNumericalFailure = 3 };

struct CommandOptions {
  /// Output directory; empty prints the report to stdout and writes no artifacts.
  std::filesystem::path out;
  bool parallel = false;
};

/// Report metadata shared by all config-driven commands.
report::Report base_report(const std::string& command, const RunConfig& cfg);

/// Writes report.json under opts.out, or prints it. Returns the exit code
/// implied by the report.
int finish(const report::Report& r, const CommandOptions& opts);

int cmd_parseval(const RunConfig& cfg, const CommandOptions& opts);
/// Writes gram.txt and report.json.
int cmd_gram(const RunConfig& cfg, const CommandOptions& opts);
/// Full pipeline; writes report.json and the model under out/model.
int cmd_dilate(const RunConfig& cfg, const CommandOptions& opts);
/// Reloads a model written by dilate and recomputes its residuals.
int cmd_verify(const RunConfig& cfg, const std::filesystem::path& model_dir, const CommandOptions& opts);

struct RootsArgs {
  std::string mode;  // principal | abelian | heisenberg | finite-heisenberg
  std::vector<std::filesystem::path> inputs;
  std::vector<std::string> names;  // generator names for abelian inputs
  std::string matrix_A;            // JSON integer matrix for abelian
  std::int64_t a = 2, b = 2, power = 2, N = 8;
  std::vector<std::int64_t> offsets;
  std::uint64_t seed = 0;
};
int cmd_roots(const RootsArgs& args, const CommandOptions& opts);

/// Model files: meta.json, V.txt, D.txt, eta.txt, chain.txt, T_<g>.txt.
void save_model(const dilation::DilationModel& m, const std::filesystem::path& dir);
dilation::DilationModel load_model(const group::Window& window, const std::filesystem::path& dir);

}  // namespace dilatekit::cli
