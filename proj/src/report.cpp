#include "dca/report.hpp"

#include "dca/text.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#ifndef DCA_VERSION
#define DCA_VERSION "unknown"
#endif

namespace dca {

namespace {

std::string fixed(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
  return out;
}

}  // namespace

void Table::write_text(std::ostream& os) const {
  std::vector<std::size_t> width(header.size(), 0);
  for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size() && i < width.size(); ++i) {
      width[i] = std::max(width[i], r[i].size());
    }
  }
  auto line = [&](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += "  ";
      out += cells[i];
      if (i + 1 < cells.size()) out.append(width[i] - cells[i].size(), ' ');
    }
    os << out << '\n';
  };
  line(header);
  std::size_t total = 0;
  for (auto w : width) total += w;
  os << std::string(total + 2 * (width.empty() ? 0 : width.size() - 1), '-') << '\n';
  for (const auto& r : rows) line(r);
}

void Table::write_tsv(std::ostream& os) const {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os << '\t';
      os << cells[i];
    }
    os << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
}

Table verdict_table(const VerdictMap& verdicts, const std::map<AntigenLabel, int>* truth) {
  Table t;
  t.header = {"label", "presented", "mature", "mcav", "class"};
  if (truth) t.header.push_back("truth");
  auto add = [&](const AntigenLabel& label, const AntigenVerdict* v) {
    std::vector<std::string> row{label.str()};
    if (v) {
      row.push_back(std::to_string(v->presentations()));
      row.push_back(std::to_string(v->presented_mature));
      const auto m = v->mean_context();
      row.push_back(m ? fixed(*m) : "-");
      row.push_back(v->decided_class ? std::to_string(*v->decided_class) : "-");
    } else {
      row.insert(row.end(), {"0", "0", "-", "-"});
    }
    if (truth) {
      const auto it = truth->find(label);
      row.push_back(it == truth->end() ? "-" : std::to_string(it->second));
    }
    t.rows.push_back(std::move(row));
  };
  for (const auto& [label, v] : verdicts) add(label, &v);
  if (truth) {
    for (const auto& [label, cls] : *truth) {
      if (!verdicts.contains(label)) add(label, nullptr);
    }
  }
  return t;
}

Table bc_summary_table(const std::vector<BcSummaryRow>& runs) {
  Table t;
  t.header = {"run", "errors", "misclassified", "unseen", "items", "mean_migrations"};
  for (const auto& [name, r] : runs) {
    double mig = 0.0;
    for (auto m : r->migrations_per_repeat) mig += static_cast<double>(m);
    if (!r->migrations_per_repeat.empty()) mig /= static_cast<double>(r->migrations_per_repeat.size());
    t.rows.push_back({name, std::to_string(r->errors.total()),
                      std::to_string(r->errors.misclassified), std::to_string(r->errors.unseen),
                      std::to_string(r->position_class.size()), fixed(mig, 1)});
  }
  return t;
}

Table process_table(const PortscanResult& r) {
  Table t;
  t.header = {"process", "antigen_mean", "antigen_sd", "mag_mean", "mag_sd", "runs_presented"};
  for (const auto& p : r.processes) {
    const bool any = p.mag.n > 0;
    t.rows.push_back({p.name, fixed(p.antigen.mean, 1), fixed(p.antigen.stddev, 1),
                      any ? fixed(p.mag.mean) : "-", any ? fixed(p.mag.stddev) : "-",
                      std::to_string(p.mag.n)});
  }
  return t;
}

Table portscan_summary_table(const std::vector<PortscanResult>& results) {
  Table t;
  t.header = {"experiment", "signals",  "safe_weight", "inflammation", "scanner_mag",
              "transfer_mag", "distance", "t",           "p",            "antigen_per_dc"};
  for (const auto& r : results) {
    const auto* s = r.process(kScannerProcess);
    const auto* x = r.process(kTransferProcess);
    const auto& tt = r.scanner_vs_transfer;
    const double apd = describe(r.antigen_per_dc).mean;
    t.rows.push_back({std::to_string(r.experiment.id), r.experiment.signals(),
                      format_double(r.experiment.safe_weight),
                      r.experiment.use_inflammation ? "1" : "0",
                      s && s->mag.n ? fixed(s->mag.mean) : "-", x && x->mag.n ? fixed(x->mag.mean) : "-",
                      tt ? fixed(tt->mean_difference) : "-",
                      tt && !tt->exact_tie ? fixed(tt->t_statistic, 2) : "-", tt ? sci(tt->p_value) : "-",
                      fixed(apd)});
  }
  return t;
}

Table process_mag_table(const std::map<std::string, GroupContext>& mag) {
  Table t;
  t.header = {"process", "presented", "mature", "mag"};
  for (const auto& [name, g] : mag) {
    const auto f = g.fraction();
    t.rows.push_back({name, std::to_string(g.total), std::to_string(g.mature), f ? fixed(*f) : "-"});
  }
  return t;
}

void write_table_files(const Table& t, const std::filesystem::path& dir, const std::string& stem) {
  auto txt = open_out(dir / (stem + ".txt"));
  t.write_text(txt);
  auto tsv = open_out(dir / (stem + ".tsv"));
  t.write_tsv(tsv);
  if (!txt || !tsv) throw std::runtime_error("failed writing table " + stem);
}

void write_manifest(const std::filesystem::path& path, const RunConfig& cfg,
                    const std::vector<std::string>& outputs) {
  auto out = open_out(path);
  out << "# command = " << to_string(cfg.experiment) << '\n';
  out << "# version = " << DCA_VERSION << '\n';
  for (const auto& o : outputs) out << "# output = " << o << '\n';
  for (const auto& [k, v] : effective_settings(cfg)) out << k << " = " << v << '\n';
  if (!out) throw std::runtime_error("failed writing manifest");
}

}  // namespace dca
