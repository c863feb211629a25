#include "dca/replay.hpp"

#include "dca/text.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace dca {

ReplayRate::ReplayRate(double multiplier) : multiplier_(multiplier) {
  if (!(multiplier > 0.0) || !std::isfinite(multiplier)) {
    throw std::invalid_argument("replay rate must be a positive number or 'max'");
  }
}

ReplayRate ReplayRate::parse(std::string_view s) {
  if (s == "max") return max();
  return ReplayRate(parse_double(s));
}

ReplayResult replay(const std::vector<Event>& events, ReplayRate rate, EventSink& sink) {
  using clock = std::chrono::steady_clock;
  ReplayResult result;
  const auto start = clock::now();
  const double origin = events.empty() ? 0.0 : events.front().timestamp;

  for (const auto& e : events) {
    if (!rate.is_max()) {
      const std::chrono::duration<double> offset((e.timestamp - origin) / rate.multiplier());
      std::this_thread::sleep_until(start + std::chrono::duration_cast<clock::duration>(offset));
    }
    try {
      sink.deliver(e);
    } catch (const std::exception& ex) {
      result.error = ex.what();
      break;
    }
    ++result.delivered;
  }
  result.undelivered = events.size() - result.delivered;

  try {
    sink.close();
  } catch (const std::exception& ex) {
    if (!result.error) result.error = ex.what();
  }
  result.elapsed = clock::now() - start;
  return result;
}

}  // namespace dca
