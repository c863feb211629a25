#include "dca/engine.hpp"

#include <cmath>
#include <stdexcept>

namespace dca {

TissueEngine::TissueEngine(PopulationConfig cfg) : tissue_(std::move(cfg)) {}

void TissueEngine::run_until(std::uint64_t tick) {
  while (tissue_.clock() < tick) {
    for (auto& r : tissue_.run_tick()) {
      if (callback_) callback_(r);
      records_.push_back(std::move(r));
    }
  }
}

void TissueEngine::accept(const Event& e) {
  if (!(e.timestamp >= last_timestamp_)) {
    throw std::invalid_argument("event timestamp went backwards");
  }
  last_timestamp_ = e.timestamp;
  run_until(static_cast<std::uint64_t>(std::floor(e.timestamp)));

  if (e.is_signal()) {
    tissue_.set_signals(e.signals());
  } else {
    const auto& a = e.antigen();
    tissue_.deposit(a.label);
    groups_[a.process].insert(a.label);
    ++counts_[a.process];
  }
  ++accepted_;
  pending_ = true;
}

void TissueEngine::finish() {
  if (!pending_) return;
  run_until(tissue_.clock() + 1);
  pending_ = false;
}

ProcessGroups TissueEngine::groups() const {
  ProcessGroups out;
  for (const auto& [name, labels] : groups_) {
    out.emplace(name, std::vector<AntigenLabel>(labels.begin(), labels.end()));
  }
  return out;
}

}  // namespace dca
