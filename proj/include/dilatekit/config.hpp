#pragma once

// Run configuration: one JSON document naming the group, the frame system,
// the window, tolerances and the seed. The layout is documented in README.md.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dilatekit/frame.hpp"
#include "dilatekit/group.hpp"

namespace dilatekit::cli {

struct Tolerances {
  double psd = 1e-10;
  double rank = 1e-10;
  double relation = 1e-10;
  double factorization = 1e-10;
  double operator_ = 1e-8;
  double unitary = 1e-10;
  double leakage = 1e-8;
  double dilation = 1e-6;
  double hermitian = 1e-12;
};

struct RunConfig {
  std::optional<group::MonomorphismSpec> spec;
  frame::FrameSystemSpec frame;
  std::int64_t j_min = -1, j_max = 1, radius = 4;
  std::int64_t core_j = 1, core_radius = 2;
  std::int64_t parseval_q_max = 64;
  Tolerances tol;
  std::uint64_t seed = 0;
  std::vector<std::string> invariance_words;
  /// Short human-readable descriptions for the report.
  std::string group_text, frame_text;

  group::Window window() const;
};

/// Throws InvalidInput on malformed documents. Relative file paths inside the
/// document are resolved against base_dir. A seed override replaces the
/// document's seed before any random input is drawn.
RunConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir = {},
                       std::optional<std::uint64_t> seed_override = {});
RunConfig load_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override = {});

}  // namespace dilatekit::cli
