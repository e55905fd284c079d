#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "posikit/diagnostics.hpp"
#include "posikit/models/allen_cahn.hpp"
#include "posikit/models/lubrication.hpp"
#include "posikit/models/pnp.hpp"
#include "posikit/models/porous_medium.hpp"

namespace posikit::cli {

/// Bad configuration; `key()` is the offending `section.key` (empty for syntax errors).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

enum class ModelId { allen_cahn, pme, lubrication, pnp };

std::string_view to_string(ModelId id);

struct RunConfig {
  ModelId model = ModelId::pme;
  int order = 2;
  double dt = 1e-3;
  double horizon = 1.0;
  Variant variant = Variant::multiplier;
  double lower_bound = 0.0;
  /// Snapshot every this many steps; 0 writes only the first and last fields.
  long snapshot_every = 0;
  std::string out;
  SolverSettings solver{};
  SecantSettings secant{};

  AllenCahnModel::Params allen_cahn{};
  PorousMediumModel::Params pme{};
  LubricationModel::Params lubrication{};
  PnpModel::Params pnp{};

  // [convergence]
  std::vector<double> dts;
  std::vector<int> orders;
  ReferenceSpec reference{};

  // [compare]
  std::vector<Variant> variants{Variant::multiplier, Variant::cutoff, Variant::mass, Variant::none};
};

RunConfig parse_config_file(const std::filesystem::path& path);
RunConfig parse_config_text(const std::string& text);

}  // namespace posikit::cli
