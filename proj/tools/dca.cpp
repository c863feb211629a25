// dca: command-line driver for the breast-cancer and port-scan experiments,
// scenario generation, log replay and the tissue server.

#include "dca/config.hpp"
#include "dca/engine.hpp"
#include "dca/replay.hpp"
#include "dca/report.hpp"
#include "dca/text.hpp"
#include "dca/transport.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#ifndef DCA_DEFAULT_DATASET
#define DCA_DEFAULT_DATASET "data/breast-cancer-wisconsin.data"
#endif

namespace fs = std::filesystem;
using namespace dca;

namespace {

struct Flags {
  std::optional<std::string> config;
  std::vector<std::pair<std::string, std::string>> settings;  // in command-line order
  std::vector<std::string> raw_settings;                      // --set key=value
};

// Registers an option whose value becomes a `key = value` setting.
CLI::Option* setting(CLI::App* app, Flags& f, const std::string& flag, const std::string& key,
                     const std::string& help) {
  return app->add_option_function<std::string>(
      flag, [&f, key](const std::string& v) { f.settings.emplace_back(key, v); }, help);
}

RunConfig build_config(ExperimentKind kind, const Flags& f) {
  RunConfig cfg;
  cfg.experiment = kind;
  if (kind == ExperimentKind::bc) cfg.dataset = DCA_DEFAULT_DATASET;
  if (f.config) load_config_file(cfg, *f.config);
  for (const auto& [k, v] : f.settings) apply_setting(cfg, k, v);
  for (const auto& kv : f.raw_settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
    apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
  return out;
}

void write_records(const fs::path& p, const std::vector<MigrationRecord>& records) {
  auto out = open_out(p);
  write_migration_log(out, records);
  if (!out) throw std::runtime_error("failed writing " + p.string());
}

std::string pad2(std::size_t i) { return (i < 10 ? "0" : "") + std::to_string(i); }

// ---- bc -------------------------------------------------------------------

int cmd_bc(const RunConfig& cfg, const std::vector<std::string>& sweep) {
  const auto items = load_dataset(cfg.dataset, cfg.dataset_format);
  const auto pop = cfg.population();
  BcOptions opt;
  opt.order = cfg.order;
  opt.population = pop;
  opt.repeats = cfg.repeat_count();
  opt.threshold = cfg.threshold;
  opt.mapping = bc_mapping(items, cfg.attributes, cfg.deviation, cfg.reference, pop.weights);
  opt.keep_logs = true;

  fs::create_directories(cfg.out);
  const auto truth = truth_of(items);
  std::vector<std::string> outputs;

  std::vector<SweepEntry> runs;
  if (sweep.empty()) {
    runs.push_back({std::string(to_string(cfg.order)), pop.threshold, run_bc_experiment(items, opt)});
  } else {
    std::vector<ThresholdMode> modes;
    for (const auto& s : sweep) modes.push_back(parse_threshold_mode(s));
    runs = run_threshold_sweep(items, opt, modes);
    for (auto& r : runs) r.name = "threshold-" + r.name;
  }

  std::vector<BcSummaryRow> rows;
  for (const auto& r : runs) {
    rows.push_back({r.name, &r.result});
    const std::string suffix = runs.size() == 1 ? "" : "-" + r.name;
    write_table_files(verdict_table(r.result.verdicts, &truth), cfg.out, "verdicts" + suffix);
    outputs.push_back("verdicts" + suffix + ".tsv");

    const fs::path logdir = cfg.out / ("migrations" + suffix);
    fs::create_directories(logdir);
    for (std::size_t i = 0; i < r.result.logs.size(); ++i) {
      write_records(logdir / ("repeat-" + pad2(i + 1) + ".log"), r.result.logs[i]);
    }
    outputs.push_back(logdir.filename().string() + "/");
  }
  const Table summary = bc_summary_table(rows);
  write_table_files(summary, cfg.out, "summary");
  outputs.push_back("summary.tsv");
  write_manifest(cfg.out / "manifest.txt", cfg, outputs);

  std::cout << "items: " << items.size() << "  repeats: " << opt.repeats
            << "  order: " << to_string(cfg.order) << "  threshold: " << format_double(cfg.threshold)
            << "\n\n";
  summary.write_text(std::cout);
  return 0;
}

// ---- portscan -------------------------------------------------------------

int cmd_portscan(const RunConfig& cfg, const std::vector<int>& which, bool logs) {
  PortscanOptions opt;
  opt.scenario = cfg.scenario;
  opt.population = cfg.population();
  opt.repeats = cfg.repeat_count();
  opt.target = cfg.safe_weight_target;
  opt.seed = cfg.seed;
  opt.keep_logs = logs;

  fs::create_directories(cfg.out);
  std::vector<std::string> outputs;
  std::vector<PortscanResult> results;
  for (const auto& e : standard_portscan_experiments()) {
    if (!which.empty() && std::find(which.begin(), which.end(), e.id) == which.end()) continue;
    results.push_back(run_portscan_experiment(e, opt));
    const auto& r = results.back();
    const std::string stem = "processes-exp" + std::to_string(e.id);
    const Table t = process_table(r);
    write_table_files(t, cfg.out, stem);
    outputs.push_back(stem + ".tsv");
    std::cout << "experiment " << e.id << " (" << e.signals() << "; safe->" << to_string(opt.target)
              << " " << format_double(e.safe_weight) << (e.use_inflammation ? "; inflammation" : "")
              << ")\n";
    t.write_text(std::cout);
    std::cout << '\n';
    if (logs) {
      const fs::path dir = cfg.out / ("migrations-exp" + std::to_string(e.id));
      fs::create_directories(dir);
      for (std::size_t i = 0; i < r.logs.size(); ++i) {
        write_records(dir / ("repeat-" + pad2(i + 1) + ".log"), r.logs[i]);
      }
      outputs.push_back(dir.filename().string() + "/");
    }
  }
  const Table summary = portscan_summary_table(results);
  write_table_files(summary, cfg.out, "summary");
  outputs.push_back("summary.tsv");
  write_manifest(cfg.out / "manifest.txt", cfg, outputs);
  summary.write_text(std::cout);
  return 0;
}

// ---- generate -------------------------------------------------------------

int cmd_generate(const RunConfig& cfg) {
  ScenarioConfig sc = cfg.scenario;
  sc.seed = cfg.seed;
  const Scenario s = generate_scenario(sc);
  fs::create_directories(cfg.out);
  write_log_file((cfg.out / "events.log").string(), s.events);

  Table t;
  t.header = {"second", "phase", "packets", "unreachable", "pamp", "danger", "safe"};
  for (std::size_t i = 0; i < s.traffic.size(); ++i) {
    t.rows.push_back({std::to_string(i), to_string(s.phases[i]), format_double(s.traffic[i].packets_per_sec),
                      format_double(s.traffic[i].unreachable_per_sec), format_double(s.signals[i].pamp),
                      format_double(s.signals[i].danger), format_double(s.signals[i].safe)});
  }
  write_table_files(t, cfg.out, "signals");
  write_manifest(cfg.out / "manifest.txt", cfg, {"events.log", "signals.tsv"});
  std::cout << "wrote " << s.events.size() << " events over " << s.traffic.size() << " s to "
            << (cfg.out / "events.log").string() << '\n';
  return 0;
}

// ---- replay / serve / report ----------------------------------------------

void write_run_tables(const fs::path& dir, const std::vector<MigrationRecord>& records,
                      const ProcessGroups& groups, double threshold) {
  const auto verdicts = classify(aggregate(records), threshold);
  write_table_files(verdict_table(verdicts), dir, "verdicts");
  if (!groups.empty()) write_table_files(process_mag_table(process_mag(verdicts, groups)), dir, "processes");
}

int cmd_replay(const RunConfig& cfg, const std::optional<std::string>& connect) {
  const auto events = read_log_file(cfg.log.string());
  const auto rate = ReplayRate::parse(cfg.rate);

  if (connect) {
    const auto colon = connect->rfind(':');
    if (colon == std::string::npos) throw std::invalid_argument("--connect expects host:port");
    const auto port = parse_uint(std::string_view(*connect).substr(colon + 1));
    if (port > 65535) throw std::invalid_argument("port out of range");
    RemoteSink sink(connect->substr(0, colon), static_cast<std::uint16_t>(port));
    const auto r = replay(events, rate, sink);
    std::cout << "delivered " << r.delivered << " events";
    if (!r.ok()) {
      std::cout << ", " << r.undelivered << " undelivered: " << *r.error << '\n';
      return 1;
    }
    std::cout << '\n';
    return 0;
  }

  fs::create_directories(cfg.out);
  TissueEngine engine(cfg.population());
  EngineSink sink(engine);
  const auto r = replay(events, rate, sink);
  if (!r.ok()) {
    std::cerr << "replay failed after " << r.delivered << " events: " << *r.error << '\n';
    return 1;
  }
  write_records(cfg.out / "migrations.log", engine.records());
  write_run_tables(cfg.out, engine.records(), engine.groups(), cfg.threshold);
  write_manifest(cfg.out / "manifest.txt", cfg, {"migrations.log", "verdicts.tsv", "processes.tsv"});
  std::cout << "replayed " << r.delivered << " events, " << engine.records().size()
            << " migrations\n";
  process_mag_table(process_mag(aggregate(engine.records()), engine.groups())).write_text(std::cout);
  return 0;
}

int cmd_serve(const RunConfig& cfg) {
  ServerOptions so;
  so.host = cfg.host;
  so.port = cfg.port;
  so.expected_clients = cfg.clients;
  so.log = [](const std::string& m) { std::cerr << "serve: " << m << '\n'; };
  TissueServer server(cfg.population(), so);
  fs::create_directories(cfg.out);
  write_manifest(cfg.out / "manifest.txt", cfg, {"session-NN/"});
  std::cout << "listening on " << cfg.host << ':' << server.port() << std::endl;

  for (std::size_t n = 1; cfg.sessions == 0 || n <= cfg.sessions; ++n) {
    const fs::path dir = cfg.out / ("session-" + pad2(n));
    fs::create_directories(dir);
    auto log = open_out(dir / "migrations.log");
    SessionStats stats;
    auto engine = server.run_session(
        [&log](const MigrationRecord& r) { log << format_migration_record(r) << std::endl; }, &stats);
    write_run_tables(dir, engine->records(), engine->groups(), cfg.threshold);
    std::cout << "session " << n << ": " << stats.frames << " frames, "
              << engine->records().size() << " migrations, " << stats.protocol_errors
              << " protocol errors, " << stats.partial_frames << " partial frames" << std::endl;
  }
  return 0;
}

int cmd_report(const RunConfig& cfg, const std::string& migrations,
               const std::optional<std::string>& events) {
  std::ifstream in(migrations);
  if (!in) throw std::runtime_error("cannot open migration log '" + migrations + "'");
  const auto records = read_migration_log(in);
  const auto verdicts = classify(aggregate(records), cfg.threshold);
  fs::create_directories(cfg.out);
  std::vector<std::string> outputs{"verdicts.tsv"};

  std::optional<std::map<AntigenLabel, int>> truth;
  if (!cfg.dataset.empty()) {
    truth = truth_of(load_dataset(cfg.dataset, cfg.dataset_format));
  }
  write_table_files(verdict_table(verdicts, truth ? &*truth : nullptr), cfg.out, "verdicts");
  std::cout << records.size() << " migrations, " << verdicts.size() << " antigen labels\n";
  if (truth) {
    const auto e = count_errors(verdicts, *truth);
    std::cout << "errors: " << e.total() << " (" << e.misclassified << " misclassified, " << e.unseen
              << " unseen)\n";
  }
  if (events) {
    ProcessGroups groups;
    for (const auto& ev : read_log_file(*events)) {
      if (ev.is_antigen()) {
        auto& g = groups[ev.antigen().process];
        if (std::find(g.begin(), g.end(), ev.antigen().label) == g.end()) g.push_back(ev.antigen().label);
      }
    }
    const Table t = process_mag_table(process_mag(verdicts, groups));
    write_table_files(t, cfg.out, "processes");
    outputs.push_back("processes.tsv");
    t.write_text(std::cout);
  }
  write_manifest(cfg.out / "manifest.txt", cfg, outputs);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dendritic cell algorithm experiments"};
  app.require_subcommand(1);
  Flags f;

  auto global = [&](CLI::App* sub) {
    sub->add_option("--config", f.config, "key = value settings file")->check(CLI::ExistingFile);
    setting(sub, f, "--seed", "seed", "master random seed");
    setting(sub, f, "--out", "out", "output directory");
    sub->add_option("--set", f.raw_settings, "extra key=value setting (repeatable)");
  };

  auto* bc = app.add_subcommand("bc", "breast-cancer experiments");
  global(bc);
  std::vector<std::string> sweep;
  setting(bc, f, "--dataset", "dataset", "dataset path");
  setting(bc, f, "--format", "dataset_format", "uci or csv");
  setting(bc, f, "--order", "order", "one-step, two-step or random");
  setting(bc, f, "--repeats", "repeats", "runs pooled into one verdict");
  setting(bc, f, "--threshold", "threshold", "mature-context threshold for anomaly");
  setting(bc, f, "--attributes", "attributes", "ranked or named");
  setting(bc, f, "--deviation", "deviation", "directional or absolute");
  setting(bc, f, "--pamp-reference", "pamp_reference", "class0 or class1");
  setting(bc, f, "--migration-threshold", "population.threshold", "number, lo:hi or var");
  setting(bc, f, "--sample-multiplicity", "population.sample_multiplicity",
          "times each antigen can be sampled");
  bc->add_option("--sweep-migration", sweep, "migration thresholds to compare, e.g. 1,5,10,15,var")
      ->delimiter(',');

  auto* ps = app.add_subcommand("portscan", "port-scan experiments on the synthetic scenario");
  global(ps);
  std::vector<int> which;
  bool ps_logs = false;
  setting(ps, f, "--repeats", "repeats", "repeats per experiment");
  setting(ps, f, "--safe-weight-target", "safe_weight_target", "weight patched by the experiments: mat or csm");
  ps->add_option("--experiments", which, "subset of 1,2,3,4")->delimiter(',')->check(CLI::Range(1, 4));
  ps->add_flag("--logs", ps_logs, "write migration logs");

  auto* gen = app.add_subcommand("generate", "write a synthetic port-scan event log");
  global(gen);
  gen->add_flag_function("--user-absent", [&](std::int64_t) { f.settings.emplace_back("scenario.user_absent", "true"); },
                         "inflammation = 1");

  auto* rep = app.add_subcommand("replay", "replay an event log into a tissue");
  global(rep);
  std::optional<std::string> connect;
  setting(rep, f, "--log", "log", "event log to replay")->required();
  setting(rep, f, "--rate", "rate", "speed multiplier or max");
  setting(rep, f, "--threshold", "threshold", "mature-context threshold for anomaly");
  rep->add_option("--connect", connect, "send to a tissue server at host:port instead");

  auto* srv = app.add_subcommand("serve", "run the tissue server");
  global(srv);
  setting(srv, f, "--host", "host", "listen address");
  setting(srv, f, "--port", "port", "listen port (0 = any)");
  setting(srv, f, "--clients", "clients", "clients per session");
  setting(srv, f, "--sessions", "sessions", "stop after this many sessions (0 = never)");

  auto* rpt = app.add_subcommand("report", "analyse a migration log");
  global(rpt);
  std::string migrations;
  std::optional<std::string> events;
  rpt->add_option("--migrations", migrations, "migration log")->required()->check(CLI::ExistingFile);
  rpt->add_option("--events", events, "event log naming the process of each antigen")->check(CLI::ExistingFile);
  setting(rpt, f, "--dataset", "dataset", "dataset with the true classes");
  setting(rpt, f, "--format", "dataset_format", "uci or csv");
  setting(rpt, f, "--threshold", "threshold", "mature-context threshold for anomaly");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (bc->parsed()) return cmd_bc(build_config(ExperimentKind::bc, f), sweep);
    if (ps->parsed()) return cmd_portscan(build_config(ExperimentKind::portscan, f), which, ps_logs);
    if (gen->parsed()) return cmd_generate(build_config(ExperimentKind::generate, f));
    if (rep->parsed()) return cmd_replay(build_config(ExperimentKind::replay, f), connect);
    if (srv->parsed()) return cmd_serve(build_config(ExperimentKind::serve, f));
    if (rpt->parsed()) return cmd_report(build_config(ExperimentKind::report, f), migrations, events);
  } catch (const std::exception& e) {
    std::cerr << "dca: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
