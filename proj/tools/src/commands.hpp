#pragma once

#include <filesystem>
#include <memory>

#include "config.hpp"

namespace posikit::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Builds the stepper-facing model for a non-PNP configuration.
std::unique_ptr<Model> make_model(const RunConfig& cfg);

int cmd_solve(const RunConfig& cfg, const std::filesystem::path& out);
int cmd_convergence(const RunConfig& cfg, const std::filesystem::path& out);
int cmd_compare(const RunConfig& cfg, const std::filesystem::path& out);

/// Entry point: `posikit {solve|convergence|compare} --config PATH [--out DIR]`.
int run_cli(int argc, const char* const* argv);

}  // namespace posikit::cli
