#pragma once

#include "dca/cell.hpp"
#include "dca/random.hpp"
#include "dca/signals.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <variant>
#include <vector>

namespace dca {

struct FixedThreshold {
  double value;
};

/// Each cell draws its threshold uniformly from [lo, hi] when created.
struct UniformThreshold {
  double lo;
  double hi;
};

using ThresholdMode = std::variant<FixedThreshold, UniformThreshold>;

struct PopulationConfig {
  std::size_t num_cells = 100;
  std::size_t cell_antigen_capacity = 50;
  std::size_t tissue_antigen_capacity = 500;
  double sampling_probability = 1.0;
  /// How many times one deposited antigen can be sampled before its slot clears.
  std::size_t sample_multiplicity = 1;
  ThresholdMode threshold = UniformThreshold{5.0, 15.0};
  WeightMatrix weights = WeightMatrix::standard();
  std::uint64_t seed = 1;

  /// Throws std::invalid_argument on any violated invariant.
  void validate() const;

  /// Breast-cancer column of the tissue parameter table: 100 cells, tissue
  /// capacity 1, sampling probability 0.1, each antigen sampled 10 times.
  static PopulationConfig breast_cancer();

  /// Port-scan column: 500 cells, tissue capacity 500, sampling probability 1,
  /// each antigen sampled once.
  static PopulationConfig portscan();
};

/// Fixed-capacity antigen store plus the current signal levels.
class TissueCompartment {
 public:
  explicit TissueCompartment(std::size_t capacity);

  /// Places `a` in the lowest free slot, or overwrites a uniformly chosen
  /// occupied slot when the store is full. Returns the slot index used.
  std::size_t deposit(const AntigenLabel& a, std::size_t multiplicity, Rng& rng);

  /// One sample from `slot`: returns the label and decrements the slot's
  /// remaining multiplicity, clearing it at zero. Empty slots return nullopt.
  std::optional<AntigenLabel> sample(std::size_t slot);

  /// Full replacement of the current signals.
  void set_signals(const SignalVector& s);
  const SignalVector& signals() const { return signals_; }

  /// Signal decay of 100%: nothing carries over into the next tick.
  void decay() { signals_ = SignalVector{}; }

  std::uint64_t clock() const { return clock_; }
  void advance() { ++clock_; }

  std::size_t capacity() const { return slots_.size(); }
  std::size_t occupied() const { return slots_.size() - free_.size(); }
  const std::optional<AntigenLabel>& slot(std::size_t i) const { return slots_.at(i).label; }
  std::size_t remaining(std::size_t i) const { return slots_.at(i).remaining; }

 private:
  struct Slot {
    std::optional<AntigenLabel> label;
    std::size_t remaining = 0;
  };

  std::vector<Slot> slots_;
  std::set<std::size_t> free_;
  SignalVector signals_;
  std::uint64_t clock_ = 0;
};

struct MigrationRecord {
  std::uint64_t tick = 0;
  CellId cell_id = 0;
  Context context = Context::semi_mature;
  std::vector<AntigenLabel> antigens;
  CytokineState final_cytokines;
  double migration_threshold = 0.0;

  friend bool operator==(const MigrationRecord&, const MigrationRecord&) = default;
};

/// The tissue compartment and its constant-size pool of dendritic cells.
/// Owns the run's random generator; all stochastic choices draw from it.
class Tissue {
 public:
  explicit Tissue(PopulationConfig cfg);
  Tissue(PopulationConfig cfg, Rng rng);

  void deposit(const AntigenLabel& a);
  void set_signals(const SignalVector& s);

  /// One cell cycle. Cells are visited in a fresh random order; each immature
  /// cell samples (with the configured probability) one random store slot and
  /// then integrates the current signals. Migrated cells are logged and
  /// replaced in place by fresh cells. Signals decay and the clock advances.
  std::vector<MigrationRecord> run_tick();

  const PopulationConfig& config() const { return cfg_; }
  const TissueCompartment& compartment() const { return compartment_; }
  const std::vector<DendriticCell>& pool() const { return pool_; }
  std::uint64_t clock() const { return compartment_.clock(); }
  std::uint64_t total_ingestions() const { return ingestions_; }
  std::uint64_t total_deposits() const { return deposits_; }
  std::uint64_t total_migrations() const { return migrations_; }

 private:
  DendriticCell fresh_cell();

  PopulationConfig cfg_;
  Rng rng_;
  TissueCompartment compartment_;
  std::vector<DendriticCell> pool_;
  std::vector<std::size_t> order_;
  CellId next_id_ = 0;
  std::uint64_t ingestions_ = 0;
  std::uint64_t deposits_ = 0;
  std::uint64_t migrations_ = 0;
};

// Migration log: one record per line, tab separated, in this field order:
//   tick  cell_id  context  antigens  csm  semi  mat  threshold
// context is "mature" or "semi"; antigens are comma separated ("-" if none);
// reals use the shortest round-trip decimal form.
std::string format_migration_record(const MigrationRecord& r);
MigrationRecord parse_migration_record(std::string_view line, std::size_t line_no = 0);
void write_migration_log(std::ostream& os, const std::vector<MigrationRecord>& records);
std::vector<MigrationRecord> read_migration_log(std::istream& is);

}  // namespace dca
