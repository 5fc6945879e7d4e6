#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "eblab/regularity.hpp"

namespace eblab {

struct ExperimentConfig {
  std::string fixture;
  SamplePlan plan;  // center is filled in from the reference minimizer at run time
  LabSettings settings;
  std::filesystem::path output_dir;
  ClaimToggles toggles;
};

/// Parses the JSON configuration text. Throws LabError with kMalformedConfig
/// or kUnknownFixture.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> output_dir;
};

/// Exit statuses: 0 when no claim FAILED, 1 when some claim FAILED, 2 on
/// configuration or estimator errors.
int run_experiment(const std::filesystem::path& config_path, const RunOverrides& overrides,
                   std::ostream& out, std::ostream& err);

/// Solver trace only: writes trace.csv.
int run_trace(const std::filesystem::path& config_path, const RunOverrides& overrides,
              std::ostream& out, std::ostream& err);

void list_fixtures(std::ostream& out);

}  // namespace eblab
