#pragma once

#include "dca/analysis.hpp"
#include "dca/event.hpp"
#include "dca/tissue.hpp"

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace dca {

/// Drives a Tissue from a timestamp-ordered event stream. Logical time is the
/// event clock: every event with floor(timestamp) == k belongs to tick k, and
/// tick k runs once the stream moves past second k (or on finish()). Seconds
/// without events still run, with zero signals.
class TissueEngine {
 public:
  using RecordCallback = std::function<void(const MigrationRecord&)>;

  explicit TissueEngine(PopulationConfig cfg);

  /// Throws std::invalid_argument if the timestamp goes backwards.
  void accept(const Event& e);

  /// Runs the tick holding the last accepted events. Idempotent.
  void finish();

  /// Called for each migration as it happens, in addition to records().
  void on_record(RecordCallback cb) { callback_ = std::move(cb); }

  const std::vector<MigrationRecord>& records() const { return records_; }
  const Tissue& tissue() const { return tissue_; }

  /// Antigen labels seen per process name.
  ProcessGroups groups() const;
  /// Number of antigen events per process name.
  const std::map<std::string, std::uint64_t>& antigen_counts() const { return counts_; }

  std::uint64_t events_accepted() const { return accepted_; }

 private:
  void run_until(std::uint64_t tick);

  Tissue tissue_;
  std::vector<MigrationRecord> records_;
  std::map<std::string, std::set<AntigenLabel>> groups_;
  std::map<std::string, std::uint64_t> counts_;
  RecordCallback callback_;
  double last_timestamp_ = 0.0;
  std::uint64_t accepted_ = 0;
  bool pending_ = false;
};

/// Destination of a replay: in-process engine or remote server.
class EventSink {
 public:
  virtual ~EventSink() = default;
  /// Throws on failure (e.g. the remote end disconnected).
  virtual void deliver(const Event& e) = 0;
  /// End of stream.
  virtual void close() = 0;
};

class EngineSink final : public EventSink {
 public:
  explicit EngineSink(TissueEngine& engine) : engine_(engine) {}
  void deliver(const Event& e) override { engine_.accept(e); }
  void close() override { engine_.finish(); }

 private:
  TissueEngine& engine_;
};

}  // namespace dca
