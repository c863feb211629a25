#include "dca/experiments.hpp"

#include "dca/engine.hpp"
#include "dca/text.hpp"

#include <cmath>
#include <stdexcept>

namespace dca {

std::string_view to_string(AttributeSelection a) {
  return a == AttributeSelection::ranked ? "ranked" : "named";
}

AttributeSelection parse_attribute_selection(std::string_view s) {
  if (s == "ranked") return AttributeSelection::ranked;
  if (s == "named") return AttributeSelection::named;
  throw std::invalid_argument("unknown attribute selection '" + std::string(s) + "'");
}

std::string_view to_string(DeviationMode d) {
  return d == DeviationMode::absolute ? "absolute" : "directional";
}

DeviationMode parse_deviation_mode(std::string_view s) {
  if (s == "absolute") return DeviationMode::absolute;
  if (s == "directional") return DeviationMode::directional;
  throw std::invalid_argument("unknown deviation mode '" + std::string(s) + "'");
}

SignalMapping bc_mapping(std::span<const LabelledItem> items, AttributeSelection selection,
                         DeviationMode deviation, PampReference reference,
                         const WeightMatrix& weights) {
  SignalMapping m = selection == AttributeSelection::ranked ? select_attributes(items)
                                                            : named_attributes(items);
  m.deviation = deviation;
  m.reference = reference;
  m.scale = calibrate_scale(items, m, weights);
  m.validate();
  return m;
}

ThresholdMode parse_threshold_mode(std::string_view s) {
  s = trim(s);
  if (s == "var") return UniformThreshold{5.0, 15.0};
  if (const auto colon = s.find(':'); colon != std::string_view::npos) {
    const double lo = parse_double(s.substr(0, colon));
    const double hi = parse_double(s.substr(colon + 1));
    if (!(lo > 0.0 && lo <= hi)) throw std::invalid_argument("threshold range needs 0 < lo <= hi");
    return UniformThreshold{lo, hi};
  }
  const double v = parse_double(s);
  if (!(v > 0.0)) throw std::invalid_argument("migration threshold must be positive");
  return FixedThreshold{v};
}

std::string format_threshold_mode(const ThresholdMode& m) {
  if (const auto* f = std::get_if<FixedThreshold>(&m)) return format_double(f->value);
  const auto& u = std::get<UniformThreshold>(m);
  if (u.lo == 5.0 && u.hi == 15.0) return "var";
  return format_double(u.lo) + ":" + format_double(u.hi);
}

std::vector<SweepEntry> run_threshold_sweep(std::span<const LabelledItem> items, BcOptions base,
                                            std::span<const ThresholdMode> modes) {
  std::vector<SweepEntry> out;
  for (const auto& mode : modes) {
    BcOptions o = base;
    o.population.threshold = mode;
    out.push_back({format_threshold_mode(mode), mode, run_bc_experiment(items, o)});
  }
  return out;
}

std::string_view to_string(SafeWeightTarget t) { return t == SafeWeightTarget::mat ? "mat" : "csm"; }

SafeWeightTarget parse_safe_weight_target(std::string_view s) {
  if (s == "mat") return SafeWeightTarget::mat;
  if (s == "csm") return SafeWeightTarget::csm;
  throw std::invalid_argument("safe weight target must be 'mat' or 'csm'");
}

std::string PortscanExperiment::signals() const {
  return use_pamp ? "pamp, danger, safe" : "danger, safe";
}

std::vector<PortscanExperiment> standard_portscan_experiments() {
  return {
      {1, false, false, -1.0},
      {2, true, false, -1.0},
      {3, true, false, -2.0},
      {4, true, true, -2.0},
  };
}

WeightMatrix patch_safe_weight(const WeightMatrix& base, double w, SafeWeightTarget target) {
  if (!std::isfinite(w)) throw std::invalid_argument("safe weight must be finite");
  const Output row = target == SafeWeightTarget::mat ? Output::mat : Output::csm;
  return base.with(row, Input::safe, w);
}

std::vector<Event> apply_signal_subset(std::vector<Event> events, const PortscanExperiment& e) {
  for (auto& ev : events) {
    if (!ev.is_signal()) continue;
    auto& s = std::get<SignalVector>(ev.payload);
    if (!e.use_pamp) s.pamp = 0.0;
    s.inflammation = e.use_inflammation ? 1.0 : 0.0;
  }
  return events;
}

const ProcessSummary* PortscanResult::process(std::string_view name) const {
  for (const auto& p : processes) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

PortscanResult run_portscan_experiment(const PortscanExperiment& experiment,
                                       const PortscanOptions& options) {
  if (options.repeats == 0) throw std::invalid_argument("repeats must be positive");
  PopulationConfig pop = options.population;
  pop.weights = patch_safe_weight(pop.weights, experiment.safe_weight, options.target);
  pop.validate();
  options.scenario.validate();

  PortscanResult result;
  result.experiment = experiment;
  const ProcessGroups groups = scenario_groups(options.scenario);
  for (const auto& p : options.scenario.processes) result.processes.push_back({p.name, {}, {}, {}});
  std::vector<std::vector<double>> antigen(result.processes.size());

  Rng master(options.seed);
  for (std::size_t r = 0; r < options.repeats; ++r) {
    ScenarioConfig sc = options.scenario;
    sc.seed = master.next_seed();
    pop.seed = master.next_seed();
    const auto events = apply_signal_subset(generate_scenario(sc).events, experiment);

    TissueEngine engine(pop);
    for (const auto& e : events) engine.accept(e);
    engine.finish();

    const auto& records = engine.records();
    const auto mag = process_mag(aggregate(records), groups);
    for (std::size_t i = 0; i < result.processes.size(); ++i) {
      auto& p = result.processes[i];
      const auto it = engine.antigen_counts().find(p.name);
      antigen[i].push_back(it == engine.antigen_counts().end() ? 0.0
                                                               : static_cast<double>(it->second));
      const auto m = mag.find(p.name);
      p.mag_per_run.push_back(m == mag.end() ? std::nullopt : m->second.fraction());
    }

    std::size_t copies = 0;
    for (const auto& rec : records) copies += rec.antigens.size();
    result.migrations.push_back(records.size());
    result.antigen_per_dc.push_back(
        records.empty() ? 0.0 : static_cast<double>(copies) / static_cast<double>(records.size()));
    if (options.keep_logs) result.logs.push_back(records);
  }

  for (std::size_t i = 0; i < result.processes.size(); ++i) {
    auto& p = result.processes[i];
    p.antigen = describe(antigen[i]);
    std::vector<double> defined;
    for (const auto& v : p.mag_per_run) {
      if (v) defined.push_back(*v);
    }
    p.mag = describe(defined);
  }

  const auto* scan = result.process(kScannerProcess);
  const auto* xfer = result.process(kTransferProcess);
  if (scan && xfer) {
    std::vector<double> xs, ys;
    for (std::size_t r = 0; r < options.repeats; ++r) {
      if (scan->mag_per_run[r] && xfer->mag_per_run[r]) {
        xs.push_back(*scan->mag_per_run[r]);
        ys.push_back(*xfer->mag_per_run[r]);
      }
    }
    if (xs.size() >= 2) result.scanner_vs_transfer = paired_t_test(xs, ys);
  }
  return result;
}

}  // namespace dca
