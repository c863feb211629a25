#pragma once

#include "dca/config.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace dca {

/// A plain table, printed aligned for people or tab-separated for tools.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write_text(std::ostream& os) const;
  void write_tsv(std::ostream& os) const;
};

/// One row per label: presentations, mature count, mean context, decision,
/// and the true class when `truth` has one.
Table verdict_table(const VerdictMap& verdicts, const std::map<AntigenLabel, int>* truth = nullptr);

struct BcSummaryRow {
  std::string name;
  const BcRunResult* result;
};

/// Error counts of one or more breast-cancer runs.
Table bc_summary_table(const std::vector<BcSummaryRow>& runs);

/// Per-process antigen count and %mAg with standard deviation across repeats.
Table process_table(const PortscanResult& r);

/// One row per experiment: scanner and transfer %mAg, their distance, the
/// paired t-test and antigen per migrated cell.
Table portscan_summary_table(const std::vector<PortscanResult>& results);

/// Mature share per process over one migration log.
Table process_mag_table(const std::map<std::string, GroupContext>& mag);

/// Writes `<dir>/<stem>.txt` and `<dir>/<stem>.tsv`.
void write_table_files(const Table& t, const std::filesystem::path& dir, const std::string& stem);

/// `key = value` lines: command, version, seed and every effective setting.
/// The settings part loads back with load_config.
void write_manifest(const std::filesystem::path& path, const RunConfig& cfg,
                    const std::vector<std::string>& outputs);

}  // namespace dca
