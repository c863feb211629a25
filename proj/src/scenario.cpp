#include "dca/scenario.hpp"

#include "dca/random.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace dca {

const char* to_string(Phase p) {
  switch (p) {
    case Phase::login: return "login";
    case Phase::scan: return "scan";
    case Phase::pause: return "pause";
    case Phase::transfer: return "transfer";
    case Phase::close: return "close";
  }
  return "?";
}

std::vector<SignalVector> derive_signals(std::span<const TrafficSample> traffic,
                                         const SignalGains& g, bool user_absent,
                                         std::size_t window) {
  if (window == 0) throw std::invalid_argument("moving-average window must be positive");
  std::vector<SignalVector> out;
  out.reserve(traffic.size());
  double prev_ma = 0.0;
  for (std::size_t t = 0; t < traffic.size(); ++t) {
    const auto& c = traffic[t];
    if (!(c.packets_per_sec >= 0.0) || !(c.unreachable_per_sec >= 0.0)) {
      throw std::invalid_argument("traffic counters must be non-negative");
    }
    const std::size_t from = t + 1 >= window ? t + 1 - window : 0;
    double sum = 0.0;
    for (std::size_t i = from; i <= t; ++i) sum += traffic[i].packets_per_sec;
    const double ma = sum / static_cast<double>(t + 1 - from);
    const double delta = t == 0 ? 0.0 : ma - prev_ma;
    prev_ma = ma;

    SignalVector s;
    s.pamp = g.k_pamp * c.unreachable_per_sec;
    s.danger = g.k_danger * c.packets_per_sec;
    s.safe = std::max(0.0, g.safe_max - g.k_safe * std::abs(delta));
    s.inflammation = user_absent ? 1.0 : 0.0;
    out.push_back(s);
  }
  return out;
}

std::vector<ProcessProfile> default_processes() {
  // rates: login, scan, pause, transfer, close
  return {
      {"ssh-client", "pid-3001", {0.6, 0, 0, 0, 0.2}},
      {"ssh-daemon", "pid-3002", {2.0, 0, 0, 0, 0.5}},
      {"ssh-daemon-priv", "pid-3003", {14.0, 0, 0, 0, 4.0}},
      {"ssh-daemon-net", "pid-3004", {1.5, 0, 0, 0, 0.5}},
      {"ssh-daemon-pam", "pid-3005", {0.6, 0, 0, 0, 0.2}},
      {"ssh-session", "pid-3006", {4.0, 5.0, 3.0, 6.0, 4.0}},
      {"shell", "pid-3007", {4.0, 2.5, 1.5, 3.0, 2.0}},
      {"scanner", "pid-3008", {0, 88.0, 0, 0, 0}},
      {"forward-agent", "pid-3009", {4.5, 5.0, 4.5, 5.5, 4.0}},
      {"file-transfer", "pid-3010", {0, 0, 0, 11.4, 0}},
  };
}

void ScenarioConfig::validate() const {
  for (auto d : durations) {
    if (d == 0) throw std::invalid_argument("phase durations must be positive");
  }
  auto fraction = [](double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(what) + " must be in [0,1]");
  };
  fraction(fraction_unreachable, "fraction_unreachable");
  auto non_negative = [](double v, const char* what) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string(what) + " must be finite and non-negative");
    }
  };
  non_negative(baseline_pps, "baseline_pps");
  non_negative(baseline_jitter, "baseline_jitter");
  non_negative(scan_pps, "scan_pps");
  non_negative(scan_jitter, "scan_jitter");
  non_negative(transfer_bytes, "transfer_bytes");
  non_negative(packets_per_segment, "packets_per_segment");
  non_negative(transfer_jitter, "transfer_jitter");
  non_negative(gains.k_pamp, "k_pamp");
  non_negative(gains.k_danger, "k_danger");
  non_negative(gains.k_safe, "k_safe");
  non_negative(gains.safe_max, "safe_max");
  if (!(segment_bytes > 0.0)) throw std::invalid_argument("segment_bytes must be positive");
  if (scan_jitter > 1.0) throw std::invalid_argument("scan_jitter must be at most 1");

  std::set<std::string> names, labels;
  for (const auto& p : processes) {
    if (p.name.empty() || p.name.find_first_of("\t\r\n") != std::string::npos) {
      throw std::invalid_argument("bad process name '" + p.name + "'");
    }
    AntigenLabel check(p.label);
    if (!names.insert(p.name).second) throw std::invalid_argument("duplicate process " + p.name);
    if (!labels.insert(p.label).second) throw std::invalid_argument("duplicate label " + p.label);
    for (double r : p.rates) non_negative(r, "emission rate");
  }
}

std::size_t ScenarioConfig::total_seconds() const {
  std::size_t n = 0;
  for (auto d : durations) n += d;
  return n;
}

Scenario generate_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  Scenario sc;

  for (std::size_t p = 0; p < kPhaseCount; ++p) {
    sc.phases.insert(sc.phases.end(), cfg.durations[p], static_cast<Phase>(p));
  }

  const double scan_s = static_cast<double>(cfg.durations[static_cast<std::size_t>(Phase::scan)]);
  const double probes_mean = static_cast<double>(cfg.address_count) / scan_s;
  const double xfer_s = static_cast<double>(cfg.durations[static_cast<std::size_t>(Phase::transfer)]);
  const double xfer_mean =
      cfg.transfer_bytes / cfg.segment_bytes * cfg.packets_per_segment / xfer_s;

  for (Phase ph : sc.phases) {
    TrafficSample c;
    c.packets_per_sec = std::max(0.0, rng.normal(cfg.baseline_pps, cfg.baseline_pps * cfg.baseline_jitter));
    if (ph == Phase::scan && probes_mean > 0.0) {
      const double probes = probes_mean * (1.0 + cfg.scan_jitter * rng.uniform(-1.0, 1.0));
      c.unreachable_per_sec = static_cast<double>(rng.poisson(probes * cfg.fraction_unreachable));
      c.packets_per_sec += probes * (cfg.scan_pps / probes_mean);
    } else if (ph == Phase::transfer) {
      c.packets_per_sec += std::max(0.0, rng.normal(xfer_mean, xfer_mean * cfg.transfer_jitter));
    }
    sc.traffic.push_back(c);
  }

  sc.signals = derive_signals(sc.traffic, cfg.gains, cfg.user_absent);

  std::vector<std::size_t> emitted;
  for (std::size_t t = 0; t < sc.phases.size(); ++t) {
    const double ts = static_cast<double>(t);
    sc.events.push_back(signal_event(ts, sc.signals[t]));

    emitted.clear();
    const auto ph = static_cast<std::size_t>(sc.phases[t]);
    for (std::size_t i = 0; i < cfg.processes.size(); ++i) {
      emitted.insert(emitted.end(), rng.poisson(cfg.processes[i].rates[ph]), i);
    }
    rng.shuffle(emitted);
    const double n = static_cast<double>(emitted.size());
    for (std::size_t j = 0; j < emitted.size(); ++j) {
      const auto& p = cfg.processes[emitted[j]];
      sc.events.push_back(antigen_event(ts + static_cast<double>(j + 1) / (n + 1.0), p.label, p.name));
    }
  }
  return sc;
}

ProcessGroups scenario_groups(const ScenarioConfig& cfg) {
  ProcessGroups g;
  for (const auto& p : cfg.processes) g[p.name].push_back(AntigenLabel(p.label));
  return g;
}

}  // namespace dca
