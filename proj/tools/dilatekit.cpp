// Command-line front end: parseval, gram, dilate, verify, roots.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "dilatekit/commands.hpp"
#include "dilatekit/errors.hpp"

namespace {

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("dilatekit");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* lvl = std::getenv("DILATEKIT_LOG")) spdlog::set_level(spdlog::level::from_str(lvl));
}

}  // namespace

int main(int argc, char** argv) {
  using namespace dilatekit;
  setup_logging();

  CLI::App app{"Numerical certification of wavelet-frame dilations"};
  app.require_subcommand(1);

  std::string config_path, out_path, model_dir;
  std::uint64_t seed = 0;
  bool parallel = false;
  cli::RootsArgs roots;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", config_path, "run configuration (JSON)");
    if (needs_config) c->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_path, "output directory (default: report to stdout)");
    sub->add_option("--seed", seed, "override the configured seed");
    sub->add_flag("--parallel", parallel, "parallel Gram assembly");
  };
  auto* parseval = app.add_subcommand("parseval", "Calderon and translation checks for an MSF wavelet");
  auto* gram = app.add_subcommand("gram", "Gram matrix over the window");
  auto* dilate = app.add_subcommand("dilate", "full dilation pipeline");
  auto* verify = app.add_subcommand("verify", "recompute residuals of a saved model");
  auto* rootc = app.add_subcommand("roots", "alpha-roots of unitary representations");
  for (auto* s : {parseval, gram, dilate, verify}) add_common(s, true);
  verify->add_option("--model", model_dir, "model directory written by dilate")->required()->check(CLI::ExistingDirectory);

  add_common(rootc, false);
  rootc->add_option("mode", roots.mode, "principal | abelian | heisenberg | finite-heisenberg")
      ->required()
      ->check(CLI::IsMember({"principal", "abelian", "heisenberg", "finite-heisenberg"}));
  rootc->add_option("--input", roots.inputs, "input matrix files (dense text format)");
  rootc->add_option("--A", roots.matrix_A, "integer matrix A for abelian roots, e.g. [[2,1],[0,2]]");
  rootc->add_option("--power", roots.power, "root order for principal roots");
  rootc->add_option("--offset", roots.offsets, "branch offsets, one per eigenvalue");
  rootc->add_option("--a", roots.a, "Heisenberg parameter a");
  rootc->add_option("--b", roots.b, "Heisenberg parameter b");
  rootc->add_option("--N", roots.N, "dimension of the finite Heisenberg representation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kInvalidInput;
  }

  cli::CommandOptions opts{out_path, parallel};
  const bool seeded = app.get_subcommands().front()->count("--seed") > 0;
  try {
    if (rootc->parsed()) {
      roots.seed = seed;
      return cli::cmd_roots(roots, opts);
    }
    const auto cfg = cli::load_config(config_path, seeded ? std::optional<std::uint64_t>(seed) : std::nullopt);
    if (parseval->parsed()) return cli::cmd_parseval(cfg, opts);
    if (gram->parsed()) return cli::cmd_gram(cfg, opts);
    if (dilate->parsed()) return cli::cmd_dilate(cfg, opts);
    return cli::cmd_verify(cfg, model_dir, opts);
  } catch (const InvalidInput& e) {
    spdlog::error("invalid input: {}", e.what());
    return cli::kInvalidInput;
  } catch (const IndefiniteKernel& e) {
    spdlog::error("{}", e.what());
    return cli::kCheckFailed;
  } catch (const RelationViolation& e) {
    spdlog::error("{}", e.what());
    return cli::kCheckFailed;
  } catch (const CommutationViolation& e) {
    spdlog::error("{}", e.what());
    return cli::kCheckFailed;
  } catch (const AlphaRootFailure& e) {
    spdlog::error("{}", e.what());
    return cli::kCheckFailed;
  } catch (const NumericalFailure& e) {
    spdlog::error("numerical failure: {}", e.what());
    return cli::kNumericalFailure;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return cli::kInvalidInput;
  }
}
