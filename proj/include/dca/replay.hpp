#pragma once

#include "dca/engine.hpp"

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dca {

/// Replay speed relative to the recorded clock. `max` does not wait at all.
class ReplayRate {
 public:
  /// Throws std::invalid_argument unless multiplier > 0.
  explicit ReplayRate(double multiplier);
  static ReplayRate max() { return ReplayRate(); }

  /// Accepts "max" or a positive number.
  static ReplayRate parse(std::string_view s);

  bool is_max() const { return !multiplier_; }
  double multiplier() const { return multiplier_.value_or(0.0); }

 private:
  ReplayRate() = default;
  std::optional<double> multiplier_;
};

struct ReplayResult {
  std::size_t delivered = 0;
  std::size_t undelivered = 0;
  std::chrono::steady_clock::duration elapsed{};
  /// Set when the sink failed part-way.
  std::optional<std::string> error;

  bool ok() const { return !error; }
};

/// Delivers `events` in order. Event i is released at
/// start + (t_i - t_0) / rate of wall-clock time; at max rate it goes as soon
/// as the sink accepts it. Logical time always follows the timestamps, so the
/// rate never changes what the tissue computes. The sink is closed at the end.
ReplayResult replay(const std::vector<Event>& events, ReplayRate rate, EventSink& sink);

}  // namespace dca
