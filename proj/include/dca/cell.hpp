#pragma once

#include "dca/signals.hpp"

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dca {

/// Raised when a caller breaks an operation's precondition (e.g. updating a
/// migrated cell). These are programming errors, not data errors.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Opaque antigen token. Non-empty, and free of whitespace and commas so it
/// can be embedded in the tab/comma separated log formats.
class AntigenLabel {
 public:
  explicit AntigenLabel(std::string value);

  const std::string& str() const { return value_; }

  static bool is_valid(std::string_view s);

  friend auto operator<=>(const AntigenLabel&, const AntigenLabel&) = default;
  friend bool operator==(const AntigenLabel&, const AntigenLabel&) = default;

 private:
  std::string value_;
};

enum class Context { semi_mature, mature };

std::string_view to_string(Context c);

enum class CellState { immature, migrated };

enum class IngestResult { accepted, store_full, cell_migrated };

struct Presentation {
  Context context;
  std::vector<AntigenLabel> antigens;
};

using CellId = std::uint64_t;

/// One dendritic cell: cytokine accumulators, a fixed migration threshold and
/// a bounded antigen store.
class DendriticCell {
 public:
  DendriticCell(CellId id, double migration_threshold, std::size_t antigen_capacity);

  CellId id() const { return id_; }
  CellState state() const { return state_; }
  bool migrated() const { return state_ == CellState::migrated; }
  const CytokineState& cytokines() const { return cytokines_; }
  double migration_threshold() const { return threshold_; }
  std::size_t antigen_capacity() const { return capacity_; }
  const std::vector<AntigenLabel>& antigens() const { return antigens_; }

  /// Adds one copy of `a`. Refuses (without changing the cell) when the store
  /// is full or the cell has migrated.
  IngestResult ingest(const AntigenLabel& a);

  /// Accumulates the fused signal and migrates once csm reaches the
  /// threshold. Throws ContractViolation on a migrated cell.
  void update(const SignalVector& s, const WeightMatrix& w);

  /// Applies precomputed cytokine increments. The csm increment is clamped at
  /// zero so csm never decreases.
  void accumulate(const Eigen::Vector3d& delta);

  /// Context is mature iff mat > semi; ties are semi-mature. Throws
  /// ContractViolation unless the cell has migrated.
  Presentation present() const;

 private:
  CellId id_;
  double threshold_;
  std::size_t capacity_;
  CellState state_ = CellState::immature;
  CytokineState cytokines_;
  std::vector<AntigenLabel> antigens_;
};

/// Context decision on raw accumulators.
inline Context context_of(const CytokineState& c) {
  return c.mat > c.semi ? Context::mature : Context::semi_mature;
}

}  // namespace dca
