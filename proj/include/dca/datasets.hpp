#pragma once

#include "dca/analysis.hpp"
#include "dca/random.hpp"
#include "dca/tissue.hpp"

#include <array>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace dca {

inline constexpr std::size_t kAttributeCount = 9;

/// Attribute columns of the Wisconsin breast-cancer file, in file order.
enum Attribute : std::size_t {
  kClumpThickness = 0,
  kCellSizeUniformity = 1,
  kCellShapeUniformity = 2,
  kMarginalAdhesion = 3,
  kEpithelialCellSize = 4,
  kBareNuclei = 5,
  kBlandChromatin = 6,
  kNormalNucleoli = 7,
  kMitoses = 8,
};

std::string_view attribute_name(std::size_t index);

struct LabelledItem {
  AntigenLabel id;
  std::array<double, kAttributeCount> attributes{};
  int true_class = 0;
};

/// Maps the UCI class codes (2 = benign, 4 = malignant) onto 0/1. The default
/// makes malignant, the smaller class, class 0.
struct ClassAssignment {
  int benign = 1;
  int malignant = 0;
};

/// Reads the UCI breast-cancer-wisconsin.data format: sample code, nine 1-10
/// attributes, class 2/4. Attributes are divided by 10. Rows with a missing
/// value ('?') are dropped. Duplicate sample codes get a "-2", "-3" suffix so
/// every item label is unique. Throws ParseError on malformed lines.
std::vector<LabelledItem> load_uci_breast_cancer(std::istream& is, ClassAssignment classes = {});

/// Generic form: id, nine real attributes, class 0/1 per line.
std::vector<LabelledItem> load_labelled_csv(std::istream& is);

enum class DatasetFormat { uci, csv };

std::vector<LabelledItem> load_dataset(const std::filesystem::path& path, DatasetFormat format,
                                       ClassAssignment classes = {});

/// How the PAMP/safe attribute turns into two concentrations.
///   absolute:    pamp = |x - ref|, safe = |x - other|
///   directional: pamp = max(0, (x - ref) * dir), safe = max(0, (other - x) * dir)
/// where ref is the class mean PAMP is measured from, other is the opposite
/// class mean and dir = sign(other - ref).
enum class DeviationMode { absolute, directional };

/// Which class mean the PAMP distance is measured from.
enum class PampReference { class0_mean, class1_mean };

struct SignalMapping {
  std::array<std::size_t, 3> danger_attributes{};
  std::size_t pamp_safe_attribute = 0;
  /// Mean of the PAMP/safe attribute in class 0 and class 1.
  std::array<double, 2> class_means{};
  double scale = 1.0;
  DeviationMode deviation = DeviationMode::directional;
  PampReference reference = PampReference::class0_mean;

  void validate() const;
};

/// Attribute indices sorted by sample standard deviation, largest first.
/// Ties keep file order.
std::vector<std::size_t> rank_attributes_by_stddev(std::span<const LabelledItem> items);

/// Top-ranked attribute feeds PAMP/safe, the next three feed danger. Throws
/// std::invalid_argument for fewer than two items or a constant dataset.
SignalMapping select_attributes(std::span<const LabelledItem> items);

/// Clump thickness for PAMP/safe; cell shape, bare nuclei and normal
/// nucleoli for danger.
SignalMapping named_attributes(std::span<const LabelledItem> items);

/// Scale that makes the mean per-item csm increment equal `target`.
double calibrate_scale(std::span<const LabelledItem> items, SignalMapping mapping,
                       const WeightMatrix& weights, double target = 1.0);

SignalVector item_to_signals(const LabelledItem& item, const SignalMapping& m);

enum class DataOrder { one_step, two_step, random };

std::string_view to_string(DataOrder o);
DataOrder parse_data_order(std::string_view s);

/// one_step: class 0 then class 1. two_step: first ceil(n0/2) of class 0,
/// all of class 1, remaining class 0. random: seeded shuffle. Within a class
/// the input order is kept.
std::vector<LabelledItem> order_stream(std::span<const LabelledItem> items, DataOrder order,
                                       Rng& rng);

struct BcOptions {
  DataOrder order = DataOrder::one_step;
  PopulationConfig population = PopulationConfig::breast_cancer();
  std::size_t repeats = 20;
  double threshold = 0.65;
  SignalMapping mapping;
  bool keep_logs = false;
};

struct BcRunResult {
  /// Pooled over all repeats and classified at the configured threshold.
  VerdictMap verdicts;
  ErrorCount errors;
  /// Mean context of the item at each stream position, averaged over the
  /// repeats in which it was presented (NaN if never presented).
  std::vector<double> position_context;
  std::vector<int> position_class;
  std::vector<std::uint64_t> ingestions_per_repeat;
  std::vector<std::uint64_t> migrations_per_repeat;
  /// Only filled when BcOptions::keep_logs is set.
  std::vector<std::vector<MigrationRecord>> logs;
};

/// Streams the items one per tick (deposit the item's antigen, set its
/// signals, run one cell cycle) for every repeat. The master generator is
/// seeded from population.seed; each repeat draws its order and tissue seed
/// from it.
BcRunResult run_bc_experiment(std::span<const LabelledItem> items, const BcOptions& options);

std::map<AntigenLabel, int> truth_of(std::span<const LabelledItem> items);

}  // namespace dca
