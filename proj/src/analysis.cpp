#include "dca/analysis.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dca {

void accumulate(VerdictMap& into, std::span<const MigrationRecord> records) {
  for (const auto& r : records) {
    for (const auto& a : r.antigens) {
      auto& v = into[a];
      if (r.context == Context::mature) {
        ++v.presented_mature;
      } else {
        ++v.presented_semi;
      }
    }
  }
}

VerdictMap aggregate(std::span<const MigrationRecord> records) {
  VerdictMap out;
  accumulate(out, records);
  return out;
}

VerdictMap classify(VerdictMap verdicts, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw std::invalid_argument("classification threshold must lie in [0, 1]");
  }
  for (auto& [label, v] : verdicts) {
    const auto mcav = v.mean_context();
    if (mcav) {
      v.decided_class = *mcav > threshold ? 1 : 0;
    } else {
      v.decided_class.reset();
    }
  }
  return verdicts;
}

ErrorCount count_errors(const VerdictMap& verdicts, const std::map<AntigenLabel, int>& truth) {
  ErrorCount e;
  for (const auto& [label, v] : verdicts) {
    if (!truth.contains(label)) {
      throw DatasetError("no ground truth for antigen '" + label.str() + "'");
    }
  }
  for (const auto& [label, cls] : truth) {
    const auto it = verdicts.find(label);
    if (it == verdicts.end() || it->second.presentations() == 0) {
      ++e.unseen;
      continue;
    }
    if (!it->second.decided_class) {
      throw ContractViolation("verdict for '" + label.str() + "' was never classified");
    }
    if (*it->second.decided_class != cls) ++e.misclassified;
  }
  return e;
}

std::map<std::string, GroupContext> process_mag(const VerdictMap& verdicts,
                                                const ProcessGroups& groups) {
  std::map<std::string, GroupContext> out;
  for (const auto& [name, labels] : groups) {
    GroupContext g;
    for (const auto& l : labels) {
      const auto it = verdicts.find(l);
      if (it == verdicts.end()) continue;
      g.mature += it->second.presented_mature;
      g.total += it->second.presentations();
    }
    out.emplace(name, g);
  }
  return out;
}

SampleStats describe(std::span<const double> xs) {
  SampleStats s;
  s.n = xs.size();
  if (xs.empty()) return s;
  s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

TTestResult paired_t_test(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw std::invalid_argument("paired t-test needs equal-length samples");
  }
  if (xs.size() < 2) throw std::invalid_argument("paired t-test needs at least 2 pairs");

  std::vector<double> d(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) d[i] = xs[i] - ys[i];
  const SampleStats s = describe(d);

  TTestResult r;
  r.mean_difference = s.mean;
  r.degrees_of_freedom = d.size() - 1;

  const bool constant =
      std::all_of(d.begin(), d.end(), [&](double v) { return v == d.front(); });
  if (constant || s.stddev == 0.0) {
    r.exact_tie = true;
    r.t_statistic = s.mean == 0.0 ? 0.0 : std::copysign(INFINITY, s.mean);
    r.p_value = s.mean == 0.0 ? 1.0 : 0.0;
    return r;
  }

  r.t_statistic = s.mean / (s.stddev / std::sqrt(static_cast<double>(d.size())));
  const boost::math::students_t dist(static_cast<double>(r.degrees_of_freedom));
  r.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(r.t_statistic)));
  r.p_value = std::min(1.0, r.p_value);
  return r;
}

}  // namespace dca
