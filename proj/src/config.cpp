#include "dca/config.hpp"

#include "dca/replay.hpp"
#include "dca/text.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace dca {

std::string_view to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::bc: return "bc";
    case ExperimentKind::portscan: return "portscan";
    case ExperimentKind::generate: return "generate";
    case ExperimentKind::replay: return "replay";
    case ExperimentKind::serve: return "serve";
    case ExperimentKind::report: return "report";
  }
  return "?";
}

namespace {

constexpr std::array<std::string_view, 3> kOutputs = {"csm", "semi", "mat"};
constexpr std::array<std::string_view, 3> kInputs = {"pamp", "danger", "safe"};
constexpr std::array<std::string_view, kPhaseCount> kPhases = {"login", "scan", "pause",
                                                               "transfer", "close"};

bool parse_bool(std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("expected true or false, got '" + std::string(v) + "'");
}

std::size_t parse_size(std::string_view v) { return static_cast<std::size_t>(parse_uint(v)); }

void apply_population(PopulationConfig& p, std::string_view key, std::string_view v) {
  if (key == "population.num_cells") {
    p.num_cells = parse_size(v);
  } else if (key == "population.cell_antigen_capacity") {
    p.cell_antigen_capacity = parse_size(v);
  } else if (key == "population.tissue_antigen_capacity") {
    p.tissue_antigen_capacity = parse_size(v);
  } else if (key == "population.sampling_probability") {
    p.sampling_probability = parse_double(v);
  } else if (key == "population.sample_multiplicity") {
    p.sample_multiplicity = parse_size(v);
  } else if (key == "population.threshold") {
    p.threshold = parse_threshold_mode(v);
  } else if (key.starts_with("weights.")) {
    const auto parts = split(key, '.');
    if (parts.size() != 3) throw std::invalid_argument("weights key must be weights.<output>.<input>");
    std::size_t o = 0, i = 0;
    while (o < kOutputs.size() && kOutputs[o] != parts[1]) ++o;
    while (i < kInputs.size() && kInputs[i] != parts[2]) ++i;
    if (o == kOutputs.size() || i == kInputs.size()) {
      throw std::invalid_argument("unknown weight '" + std::string(key) + "'");
    }
    const double w = parse_double(v);
    if (!std::isfinite(w)) throw std::invalid_argument("weights must be finite");
    p.weights = p.weights.with(static_cast<Output>(o), static_cast<Input>(i), w);
  } else {
    throw std::invalid_argument("unknown setting '" + std::string(key) + "'");
  }
}

}  // namespace

PopulationConfig RunConfig::population() const {
  PopulationConfig p = experiment == ExperimentKind::bc ? PopulationConfig::breast_cancer()
                                                        : PopulationConfig::portscan();
  for (const auto& [k, v] : population_overrides) apply_population(p, k, v);
  p.seed = seed;
  p.validate();
  return p;
}

std::size_t RunConfig::repeat_count() const {
  if (repeats) return *repeats;
  return experiment == ExperimentKind::bc ? 20 : 10;
}

void apply_setting(RunConfig& c, std::string_view key, std::string_view v) {
  key = trim(key);
  v = trim(v);
  auto& s = c.scenario;
  if (key == "seed") {
    c.seed = parse_uint(v);
  } else if (key == "out") {
    c.out = std::string(v);
  } else if (key == "dataset") {
    c.dataset = std::string(v);
  } else if (key == "dataset_format") {
    if (v == "uci") c.dataset_format = DatasetFormat::uci;
    else if (v == "csv") c.dataset_format = DatasetFormat::csv;
    else throw std::invalid_argument("dataset_format must be uci or csv");
  } else if (key == "order") {
    c.order = parse_data_order(v);
  } else if (key == "attributes") {
    c.attributes = parse_attribute_selection(v);
  } else if (key == "deviation") {
    c.deviation = parse_deviation_mode(v);
  } else if (key == "pamp_reference") {
    if (v == "class0") c.reference = PampReference::class0_mean;
    else if (v == "class1") c.reference = PampReference::class1_mean;
    else throw std::invalid_argument("pamp_reference must be class0 or class1");
  } else if (key == "threshold") {
    const double t = parse_double(v);
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("threshold must lie in [0, 1]");
    c.threshold = t;
  } else if (key == "repeats") {
    const auto n = parse_size(v);
    if (n == 0) throw std::invalid_argument("repeats must be positive");
    c.repeats = n;
  } else if (key == "safe_weight_target") {
    c.safe_weight_target = parse_safe_weight_target(v);
  } else if (key == "log") {
    c.log = std::string(v);
  } else if (key == "rate") {
    ReplayRate::parse(v);
    c.rate = std::string(v);
  } else if (key == "host") {
    c.host = std::string(v);
  } else if (key == "port") {
    const auto p = parse_uint(v);
    if (p > 65535) throw std::invalid_argument("port out of range");
    c.port = static_cast<std::uint16_t>(p);
  } else if (key == "clients") {
    c.clients = parse_size(v);
    if (c.clients == 0) throw std::invalid_argument("clients must be positive");
  } else if (key == "sessions") {
    c.sessions = parse_size(v);
  } else if (key.starts_with("scenario.")) {
    const auto name = key.substr(9);
    for (std::size_t i = 0; i < kPhases.size(); ++i) {
      if (name == kPhases[i]) {
        s.durations[i] = parse_size(v);
        s.validate();
        return;
      }
    }
    if (name == "address_count") s.address_count = parse_size(v);
    else if (name == "fraction_unreachable") s.fraction_unreachable = parse_double(v);
    else if (name == "baseline_pps") s.baseline_pps = parse_double(v);
    else if (name == "baseline_jitter") s.baseline_jitter = parse_double(v);
    else if (name == "scan_pps") s.scan_pps = parse_double(v);
    else if (name == "scan_jitter") s.scan_jitter = parse_double(v);
    else if (name == "transfer_bytes") s.transfer_bytes = parse_double(v);
    else if (name == "segment_bytes") s.segment_bytes = parse_double(v);
    else if (name == "packets_per_segment") s.packets_per_segment = parse_double(v);
    else if (name == "transfer_jitter") s.transfer_jitter = parse_double(v);
    else if (name == "k_pamp") s.gains.k_pamp = parse_double(v);
    else if (name == "k_danger") s.gains.k_danger = parse_double(v);
    else if (name == "k_safe") s.gains.k_safe = parse_double(v);
    else if (name == "safe_max") s.gains.safe_max = parse_double(v);
    else if (name == "user_absent") s.user_absent = parse_bool(v);
    else throw std::invalid_argument("unknown setting '" + std::string(key) + "'");
    s.validate();
  } else if (key.starts_with("population.") || key.starts_with("weights.")) {
    // Check it now so errors point at the right line.
    PopulationConfig probe;
    apply_population(probe, key, v);
    probe.validate();
    c.population_overrides.emplace_back(std::string(key), std::string(v));
  } else {
    throw std::invalid_argument("unknown setting '" + std::string(key) + "'");
  }
}

void load_config(RunConfig& cfg, std::istream& is) {
  std::string line;
  std::size_t n = 0;
  while (std::getline(is, line)) {
    ++n;
    std::string_view l = line;
    if (const auto hash = l.find('#'); hash != std::string_view::npos) l = l.substr(0, hash);
    l = trim(l);
    if (l.empty()) continue;
    const auto eq = l.find('=');
    if (eq == std::string_view::npos) throw ParseError(n, "expected key = value");
    try {
      apply_setting(cfg, l.substr(0, eq), l.substr(eq + 1));
    } catch (const std::invalid_argument& e) {
      throw ParseError(n, e.what());
    }
  }
}

void load_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path.string() + "'");
  load_config(cfg, in);
}

std::vector<std::pair<std::string, std::string>> effective_settings(const RunConfig& c) {
  std::vector<std::pair<std::string, std::string>> out;
  auto add = [&](std::string k, std::string v) { out.emplace_back(std::move(k), std::move(v)); };
  auto num = [](double d) { return format_double(d); };

  add("seed", std::to_string(c.seed));
  add("out", c.out.string());
  if (c.experiment == ExperimentKind::bc) {
    add("dataset", c.dataset.string());
    add("dataset_format", c.dataset_format == DatasetFormat::uci ? "uci" : "csv");
    add("order", std::string(to_string(c.order)));
    add("attributes", std::string(to_string(c.attributes)));
    add("deviation", std::string(to_string(c.deviation)));
    add("pamp_reference", c.reference == PampReference::class0_mean ? "class0" : "class1");
    add("threshold", num(c.threshold));
  }
  if (c.experiment == ExperimentKind::bc || c.experiment == ExperimentKind::portscan) {
    add("repeats", std::to_string(c.repeat_count()));
  }
  if (c.experiment == ExperimentKind::portscan) {
    add("safe_weight_target", std::string(to_string(c.safe_weight_target)));
  }
  if (c.experiment == ExperimentKind::portscan || c.experiment == ExperimentKind::generate) {
    const auto& s = c.scenario;
    for (std::size_t i = 0; i < kPhases.size(); ++i) {
      add("scenario." + std::string(kPhases[i]), std::to_string(s.durations[i]));
    }
    add("scenario.address_count", std::to_string(s.address_count));
    add("scenario.fraction_unreachable", num(s.fraction_unreachable));
    add("scenario.baseline_pps", num(s.baseline_pps));
    add("scenario.baseline_jitter", num(s.baseline_jitter));
    add("scenario.scan_pps", num(s.scan_pps));
    add("scenario.scan_jitter", num(s.scan_jitter));
    add("scenario.transfer_bytes", num(s.transfer_bytes));
    add("scenario.segment_bytes", num(s.segment_bytes));
    add("scenario.packets_per_segment", num(s.packets_per_segment));
    add("scenario.transfer_jitter", num(s.transfer_jitter));
    add("scenario.k_pamp", num(s.gains.k_pamp));
    add("scenario.k_danger", num(s.gains.k_danger));
    add("scenario.k_safe", num(s.gains.k_safe));
    add("scenario.safe_max", num(s.gains.safe_max));
    add("scenario.user_absent", s.user_absent ? "true" : "false");
  }
  if (c.experiment == ExperimentKind::replay) add("log", c.log.string());
  if (c.experiment == ExperimentKind::report && !c.dataset.empty()) {
    add("dataset", c.dataset.string());
    add("dataset_format", c.dataset_format == DatasetFormat::uci ? "uci" : "csv");
  }
  if (c.experiment == ExperimentKind::replay || c.experiment == ExperimentKind::report) {
    add("threshold", format_double(c.threshold));
  }
  if (c.experiment == ExperimentKind::replay) add("rate", c.rate);
  if (c.experiment == ExperimentKind::serve) {
    add("host", c.host);
    add("port", std::to_string(c.port));
    add("clients", std::to_string(c.clients));
    add("sessions", std::to_string(c.sessions));
  }
  if (c.experiment != ExperimentKind::generate && c.experiment != ExperimentKind::report) {
    const PopulationConfig p = c.population();
    add("population.num_cells", std::to_string(p.num_cells));
    add("population.cell_antigen_capacity", std::to_string(p.cell_antigen_capacity));
    add("population.tissue_antigen_capacity", std::to_string(p.tissue_antigen_capacity));
    add("population.sampling_probability", num(p.sampling_probability));
    add("population.sample_multiplicity", std::to_string(p.sample_multiplicity));
    add("population.threshold", format_threshold_mode(p.threshold));
    for (std::size_t o = 0; o < 3; ++o) {
      for (std::size_t i = 0; i < 3; ++i) {
        add("weights." + std::string(kOutputs[o]) + "." + std::string(kInputs[i]),
            num(p.weights(static_cast<Output>(o), static_cast<Input>(i))));
      }
    }
  }
  return out;
}

}  // namespace dca
