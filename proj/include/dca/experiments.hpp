#pragma once

#include "dca/datasets.hpp"
#include "dca/scenario.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dca {

// ---- breast cancer --------------------------------------------------------

enum class AttributeSelection { ranked, named };

std::string_view to_string(AttributeSelection a);
AttributeSelection parse_attribute_selection(std::string_view s);
std::string_view to_string(DeviationMode d);
DeviationMode parse_deviation_mode(std::string_view s);

/// Picks the attributes, fills in the class means and calibrates the scale so
/// the mean per-item csm increment is 1.
SignalMapping bc_mapping(std::span<const LabelledItem> items, AttributeSelection selection,
                         DeviationMode deviation, PampReference reference,
                         const WeightMatrix& weights);

/// "var" is uniform(5, 15); "lo:hi" is any uniform range; a number is fixed.
ThresholdMode parse_threshold_mode(std::string_view s);
std::string format_threshold_mode(const ThresholdMode& m);

struct SweepEntry {
  std::string name;
  ThresholdMode mode;
  BcRunResult result;
};

/// Runs `base` once per threshold mode; everything else, including the seed,
/// stays the same.
std::vector<SweepEntry> run_threshold_sweep(std::span<const LabelledItem> items, BcOptions base,
                                            std::span<const ThresholdMode> modes);

// ---- port scan ------------------------------------------------------------

inline constexpr std::string_view kScannerProcess = "scanner";
inline constexpr std::string_view kTransferProcess = "file-transfer";

/// Which weight the experiment's safe-signal weight replaces.
enum class SafeWeightTarget { mat, csm };

std::string_view to_string(SafeWeightTarget t);
SafeWeightTarget parse_safe_weight_target(std::string_view s);

struct PortscanExperiment {
  int id = 1;
  bool use_pamp = true;
  bool use_inflammation = false;
  double safe_weight = -1.0;

  std::string signals() const;
};

/// The four signal/weight combinations: danger+safe at -1, all three at -1,
/// all three at -2, all three at -2 with inflammation.
std::vector<PortscanExperiment> standard_portscan_experiments();

/// Throws std::invalid_argument if `w` is not finite or leaves an all-zero row.
WeightMatrix patch_safe_weight(const WeightMatrix& base, double w, SafeWeightTarget target);

/// Drops PAMP and sets inflammation as the experiment asks.
std::vector<Event> apply_signal_subset(std::vector<Event> events, const PortscanExperiment& e);

struct PortscanOptions {
  ScenarioConfig scenario;
  PopulationConfig population = PopulationConfig::portscan();
  std::size_t repeats = 10;
  SafeWeightTarget target = SafeWeightTarget::mat;
  /// Master seed. Repeat r uses the same scenario and tissue seeds in every
  /// experiment, so experiments are paired.
  std::uint64_t seed = 1;
  bool keep_logs = false;
};

struct ProcessSummary {
  std::string name;
  SampleStats antigen;
  /// Over the runs where the process was presented at all.
  SampleStats mag;
  /// One entry per run; empty when nothing of the process was presented.
  std::vector<std::optional<double>> mag_per_run;
};

struct PortscanResult {
  PortscanExperiment experiment;
  std::vector<ProcessSummary> processes;
  /// Paired over runs where both processes were presented.
  std::optional<TTestResult> scanner_vs_transfer;
  /// Mean antigen copies per migrated cell, one value per run.
  std::vector<double> antigen_per_dc;
  std::vector<std::size_t> migrations;
  std::vector<std::vector<MigrationRecord>> logs;

  const ProcessSummary* process(std::string_view name) const;
};

PortscanResult run_portscan_experiment(const PortscanExperiment& experiment,
                                       const PortscanOptions& options);

}  // namespace dca
