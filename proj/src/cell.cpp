#include "dca/cell.hpp"

#include <algorithm>
#include <cctype>

namespace dca {

bool AntigenLabel::is_valid(std::string_view s) {
  if (s.empty()) return false;
  return std::none_of(s.begin(), s.end(), [](char c) {
    return c == ',' || std::isspace(static_cast<unsigned char>(c)) ||
           std::iscntrl(static_cast<unsigned char>(c));
  });
}

AntigenLabel::AntigenLabel(std::string value) : value_(std::move(value)) {
  if (!is_valid(value_)) {
    throw std::invalid_argument("invalid antigen label '" + value_ + "'");
  }
}

std::string_view to_string(Context c) {
  return c == Context::mature ? "mature" : "semi";
}

DendriticCell::DendriticCell(CellId id, double migration_threshold,
                             std::size_t antigen_capacity)
    : id_(id), threshold_(migration_threshold), capacity_(antigen_capacity) {
  if (!(migration_threshold > 0.0)) {
    throw std::invalid_argument("migration threshold must be positive");
  }
  if (antigen_capacity == 0) {
    throw std::invalid_argument("cell antigen capacity must be positive");
  }
  antigens_.reserve(std::min<std::size_t>(capacity_, 8));
}

IngestResult DendriticCell::ingest(const AntigenLabel& a) {
  if (migrated()) return IngestResult::cell_migrated;
  if (antigens_.size() >= capacity_) return IngestResult::store_full;
  antigens_.push_back(a);
  return IngestResult::accepted;
}

void DendriticCell::update(const SignalVector& s, const WeightMatrix& w) {
  if (migrated()) throw ContractViolation("update on a migrated cell");
  accumulate(fuse_signals(s, w));
}

void DendriticCell::accumulate(const Eigen::Vector3d& delta) {
  if (migrated()) throw ContractViolation("update on a migrated cell");
  cytokines_.csm += std::max(0.0, delta(0));
  cytokines_.semi += delta(1);
  cytokines_.mat += delta(2);
  if (cytokines_.csm >= threshold_) state_ = CellState::migrated;
}

Presentation DendriticCell::present() const {
  if (!migrated()) throw ContractViolation("present on an immature cell");
  return {context_of(cytokines_), antigens_};
}

}  // namespace dca
