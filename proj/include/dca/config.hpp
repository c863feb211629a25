#pragma once

#include "dca/experiments.hpp"

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dca {

enum class ExperimentKind { bc, portscan, generate, replay, serve, report };

std::string_view to_string(ExperimentKind k);

/// Everything needed to reproduce a run. Population parameters start from
/// the defaults of the experiment kind (breast-cancer or port-scan column) and
/// then take the overrides in file/flag order.
struct RunConfig {
  ExperimentKind experiment = ExperimentKind::bc;
  std::uint64_t seed = 1;
  std::filesystem::path out = "out";

  std::filesystem::path dataset;
  DatasetFormat dataset_format = DatasetFormat::uci;
  DataOrder order = DataOrder::one_step;
  AttributeSelection attributes = AttributeSelection::ranked;
  DeviationMode deviation = DeviationMode::directional;
  PampReference reference = PampReference::class0_mean;
  double threshold = 0.65;
  /// 20 for bc, 10 for portscan when unset.
  std::optional<std::size_t> repeats;

  ScenarioConfig scenario;
  SafeWeightTarget safe_weight_target = SafeWeightTarget::mat;

  std::filesystem::path log;
  std::string rate = "max";
  std::string host = "127.0.0.1";
  std::uint16_t port = 7070;
  std::size_t clients = 1;
  /// 0 = serve until interrupted.
  std::size_t sessions = 0;

  /// Raw "population.*" and "weights.*" settings, applied by population().
  std::vector<std::pair<std::string, std::string>> population_overrides;

  PopulationConfig population() const;
  std::size_t repeat_count() const;
};

/// Applies one `key = value` setting. Throws std::invalid_argument for an
/// unknown key or a bad value.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

/// Line-oriented `key = value` text; '#' starts a comment. Throws ParseError
/// naming the line.
void load_config(RunConfig& cfg, std::istream& is);
void load_config_file(RunConfig& cfg, const std::filesystem::path& path);

/// Every setting with its effective value, as `key = value` pairs that
/// load_config accepts.
std::vector<std::pair<std::string, std::string>> effective_settings(const RunConfig& cfg);

}  // namespace dca
