#pragma once

#include "dca/analysis.hpp"
#include "dca/event.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace dca {

enum class Phase { login, scan, pause, transfer, close };
inline constexpr std::size_t kPhaseCount = 5;

const char* to_string(Phase p);

/// Per-second sensor counters.
struct TrafficSample {
  double packets_per_sec = 0.0;
  double unreachable_per_sec = 0.0;
};

struct SignalGains {
  double k_pamp = 4.0;
  double k_danger = 0.1;
  double k_safe = 1.0;
  double safe_max = 100.0;
};

/// Maps traffic counters to signals, one SignalVector per second:
///   pamp   = k_pamp * unreachable/s
///   danger = k_danger * packets/s
///   safe   = max(0, safe_max - k_safe * |ma_t - ma_{t-1}|)
/// where ma is the moving average of packets/s over `window` seconds (shorter
/// at the start of the series). The first second has a zero delta.
/// Throws std::invalid_argument on negative counters or a zero window.
std::vector<SignalVector> derive_signals(std::span<const TrafficSample> traffic,
                                         const SignalGains& gains, bool user_absent,
                                         std::size_t window = 2);

/// A synthetic process and its antigen emission rate (events/s) in each phase.
struct ProcessProfile {
  std::string name;
  std::string label;
  std::array<double, kPhaseCount> rates{};
};

/// Process set shaped after an ssh session that runs a scan, then copies a
/// file out.
std::vector<ProcessProfile> default_processes();

struct ScenarioConfig {
  /// Whole seconds per phase, in Phase order.
  std::array<std::size_t, kPhaseCount> durations = {15, 40, 30, 8, 10};

  std::size_t address_count = 1000;
  double fraction_unreachable = 0.8;

  double baseline_pps = 20.0;
  double baseline_jitter = 0.15;
  /// Packets/s while scanning, at the mean probe rate.
  double scan_pps = 800.0;
  double scan_jitter = 0.6;
  double transfer_bytes = 3.3e6;
  double segment_bytes = 1448.0;
  double packets_per_segment = 1.5;
  double transfer_jitter = 0.6;

  SignalGains gains;
  bool user_absent = false;
  std::uint64_t seed = 1;

  std::vector<ProcessProfile> processes = default_processes();

  /// Throws std::invalid_argument on any violated invariant.
  void validate() const;
  std::size_t total_seconds() const;
};

struct Scenario {
  std::vector<Event> events;
  std::vector<TrafficSample> traffic;
  std::vector<Phase> phases;
  std::vector<SignalVector> signals;
};

/// One signal event at t = s for each second s, then that second's antigen
/// events spread over (s, s+1).
Scenario generate_scenario(const ScenarioConfig& cfg);

/// Process name -> antigen labels, as declared by the profiles.
ProcessGroups scenario_groups(const ScenarioConfig& cfg);

}  // namespace dca
