#pragma once

#include "dca/tissue.hpp"

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dca {

/// Ground truth and verdicts disagree about which labels exist.
class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Presentation counts of one antigen label across a set of migration records.
struct AntigenVerdict {
  std::uint64_t presented_mature = 0;
  std::uint64_t presented_semi = 0;
  /// 1 = anomalous, 0 = normal; unset until classify() runs.
  std::optional<int> decided_class;

  std::uint64_t presentations() const { return presented_mature + presented_semi; }

  /// Fraction of presentations in mature context; empty if never presented.
  std::optional<double> mean_context() const {
    if (presentations() == 0) return std::nullopt;
    return static_cast<double>(presented_mature) / static_cast<double>(presentations());
  }
};

using VerdictMap = std::map<AntigenLabel, AntigenVerdict>;

/// Every antigen copy in every record counts once under the record's context.
VerdictMap aggregate(std::span<const MigrationRecord> records);

/// Adds records to an existing tally (used to pool repeats).
void accumulate(VerdictMap& into, std::span<const MigrationRecord> records);

/// mean_context > threshold gives class 1, anything else class 0. Labels with
/// no presentations stay unclassified.
VerdictMap classify(VerdictMap verdicts, double threshold);

struct ErrorCount {
  /// Presented labels whose decided class differs from the truth.
  std::size_t misclassified = 0;
  /// Labels in the truth that were never presented; also errors.
  std::size_t unseen = 0;

  std::size_t total() const { return misclassified + unseen; }
};

/// Throws DatasetError if a verdict label has no truth entry, and
/// ContractViolation if a presented verdict was never classified.
ErrorCount count_errors(const VerdictMap& verdicts, const std::map<AntigenLabel, int>& truth);

struct GroupContext {
  std::uint64_t mature = 0;
  std::uint64_t total = 0;

  /// Mature share of the group's presentations; empty when total is zero.
  std::optional<double> fraction() const {
    if (total == 0) return std::nullopt;
    return static_cast<double>(mature) / static_cast<double>(total);
  }
};

using ProcessGroups = std::map<std::string, std::vector<AntigenLabel>>;

/// Pooled mature share per named group ("% mAg").
std::map<std::string, GroupContext> process_mag(const VerdictMap& verdicts,
                                                const ProcessGroups& groups);

struct TTestResult {
  double mean_difference = 0.0;
  double t_statistic = 0.0;
  double p_value = 1.0;
  std::size_t degrees_of_freedom = 0;
  /// All differences identical: no variance, so no t statistic. p_value is 1
  /// for a zero shift and 0 for a non-zero one.
  bool exact_tie = false;
};

/// Two-tailed paired Student t-test on xs[i] - ys[i] with n - 1 degrees of
/// freedom. Throws std::invalid_argument on length mismatch or n < 2.
TTestResult paired_t_test(std::span<const double> xs, std::span<const double> ys);

struct SampleStats {
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t n = 0;
};

/// Mean and sample standard deviation (n - 1); stddev is 0 for n < 2.
SampleStats describe(std::span<const double> xs);

}  // namespace dca
