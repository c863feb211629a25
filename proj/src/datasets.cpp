#include "dca/datasets.hpp"

#include "dca/text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <unordered_map>

namespace dca {

std::string_view attribute_name(std::size_t index) {
  static constexpr std::array<std::string_view, kAttributeCount> names = {
      "clump_thickness", "cell_size_uniformity", "cell_shape_uniformity",
      "marginal_adhesion", "epithelial_cell_size", "bare_nuclei",
      "bland_chromatin", "normal_nucleoli", "mitoses"};
  return names.at(index);
}

namespace {

class UniqueLabels {
 public:
  AntigenLabel make(std::string_view base) {
    const auto n = ++seen_[std::string(base)];
    if (n == 1) return AntigenLabel(std::string(base));
    return AntigenLabel(std::string(base) + "-" + std::to_string(n));
  }

 private:
  std::unordered_map<std::string, std::size_t> seen_;
};

}  // namespace

std::vector<LabelledItem> load_uci_breast_cancer(std::istream& is, ClassAssignment classes) {
  std::vector<LabelledItem> items;
  UniqueLabels labels;
  std::string line;
  std::size_t n = 0;
  while (std::getline(is, line)) {
    ++n;
    const auto body = trim(line);
    if (body.empty()) continue;
    const auto f = split(body, ',');
    if (f.size() != kAttributeCount + 2) {
      throw ParseError(n, "expected 11 comma-separated fields");
    }
    if (std::any_of(f.begin() + 1, f.end() - 1, [](auto v) { return trim(v) == "?"; })) {
      continue;
    }
    try {
      std::array<double, kAttributeCount> attrs{};
      for (std::size_t i = 0; i < kAttributeCount; ++i) {
        attrs[i] = parse_double(trim(f[i + 1])) / 10.0;
      }
      const auto code = parse_uint(trim(f.back()));
      int cls;
      if (code == 2) {
        cls = classes.benign;
      } else if (code == 4) {
        cls = classes.malignant;
      } else {
        throw std::invalid_argument("class code must be 2 or 4");
      }
      items.push_back({labels.make(trim(f[0])), attrs, cls});
    } catch (const std::invalid_argument& e) {
      throw ParseError(n, e.what());
    }
  }
  return items;
}

std::vector<LabelledItem> load_labelled_csv(std::istream& is) {
  std::vector<LabelledItem> items;
  std::string line;
  std::size_t n = 0;
  while (std::getline(is, line)) {
    ++n;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto f = split(body, ',');
    if (f.size() != kAttributeCount + 2) {
      throw ParseError(n, "expected 11 comma-separated fields");
    }
    try {
      LabelledItem item{AntigenLabel(std::string(trim(f[0]))), {}, 0};
      for (std::size_t i = 0; i < kAttributeCount; ++i) {
        item.attributes[i] = parse_double(trim(f[i + 1]));
        if (!std::isfinite(item.attributes[i])) throw std::invalid_argument("non-finite attribute");
      }
      const auto cls = parse_uint(trim(f.back()));
      if (cls > 1) throw std::invalid_argument("class must be 0 or 1");
      item.true_class = static_cast<int>(cls);
      items.push_back(std::move(item));
    } catch (const std::invalid_argument& e) {
      throw ParseError(n, e.what());
    }
  }
  return items;
}

std::vector<LabelledItem> load_dataset(const std::filesystem::path& path, DatasetFormat format,
                                       ClassAssignment classes) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset '" + path.string() + "'");
  return format == DatasetFormat::uci ? load_uci_breast_cancer(in, classes)
                                      : load_labelled_csv(in);
}

void SignalMapping::validate() const {
  std::array<std::size_t, 4> idx = {pamp_safe_attribute, danger_attributes[0],
                                    danger_attributes[1], danger_attributes[2]};
  for (auto i : idx) {
    if (i >= kAttributeCount) throw std::invalid_argument("attribute index out of range");
  }
  std::sort(idx.begin(), idx.end());
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end()) {
    throw std::invalid_argument("signal attributes must be distinct");
  }
  if (!(scale > 0.0)) throw std::invalid_argument("signal scale must be positive");
}

std::vector<std::size_t> rank_attributes_by_stddev(std::span<const LabelledItem> items) {
  std::array<double, kAttributeCount> sd{};
  for (std::size_t a = 0; a < kAttributeCount; ++a) {
    std::vector<double> column;
    column.reserve(items.size());
    for (const auto& it : items) column.push_back(it.attributes[a]);
    sd[a] = describe(column).stddev;
  }
  std::vector<std::size_t> order(kAttributeCount);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sd[x] > sd[y]; });
  if (sd[order.front()] == 0.0) throw std::invalid_argument("every attribute is constant");
  return order;
}

namespace {

std::array<double, 2> class_means(std::span<const LabelledItem> items, std::size_t attribute) {
  std::array<double, 2> sum{}, count{};
  for (const auto& it : items) {
    sum[it.true_class] += it.attributes[attribute];
    count[it.true_class] += 1.0;
  }
  return {count[0] ? sum[0] / count[0] : 0.0, count[1] ? sum[1] / count[1] : 0.0};
}

}  // namespace

SignalMapping select_attributes(std::span<const LabelledItem> items) {
  if (items.size() < 2) throw std::invalid_argument("attribute selection needs >= 2 items");
  const auto rank = rank_attributes_by_stddev(items);
  SignalMapping m;
  m.pamp_safe_attribute = rank[0];
  m.danger_attributes = {rank[1], rank[2], rank[3]};
  m.class_means = class_means(items, m.pamp_safe_attribute);
  return m;
}

SignalMapping named_attributes(std::span<const LabelledItem> items) {
  SignalMapping m;
  m.pamp_safe_attribute = kClumpThickness;
  m.danger_attributes = {kCellShapeUniformity, kBareNuclei, kNormalNucleoli};
  m.class_means = class_means(items, m.pamp_safe_attribute);
  return m;
}

SignalVector item_to_signals(const LabelledItem& item, const SignalMapping& m) {
  const double x = item.attributes[m.pamp_safe_attribute];
  const bool from0 = m.reference == PampReference::class0_mean;
  const double ref = from0 ? m.class_means[0] : m.class_means[1];
  const double other = from0 ? m.class_means[1] : m.class_means[0];

  double pamp, safe;
  if (m.deviation == DeviationMode::absolute) {
    pamp = std::fabs(x - ref);
    safe = std::fabs(x - other);
  } else {
    const double dir = other >= ref ? 1.0 : -1.0;
    pamp = std::max(0.0, (x - ref) * dir);
    safe = std::max(0.0, (other - x) * dir);
  }

  double danger = 0.0;
  for (auto a : m.danger_attributes) danger += item.attributes[a];
  danger /= 3.0;

  return SignalVector{m.scale * pamp, m.scale * std::max(0.0, danger), m.scale * safe, 0.0};
}

double calibrate_scale(std::span<const LabelledItem> items, SignalMapping mapping,
                       const WeightMatrix& weights, double target) {
  if (items.empty()) throw std::invalid_argument("cannot calibrate on an empty dataset");
  mapping.scale = 1.0;
  double total = 0.0;
  for (const auto& it : items) total += fuse_signals(item_to_signals(it, mapping), weights)(0);
  const double mean = total / static_cast<double>(items.size());
  if (!(mean > 0.0)) throw std::invalid_argument("dataset produces no csm signal");
  return target / mean;
}

std::string_view to_string(DataOrder o) {
  switch (o) {
    case DataOrder::one_step: return "one-step";
    case DataOrder::two_step: return "two-step";
    case DataOrder::random: return "random";
  }
  return "?";
}

DataOrder parse_data_order(std::string_view s) {
  if (s == "one-step") return DataOrder::one_step;
  if (s == "two-step") return DataOrder::two_step;
  if (s == "random") return DataOrder::random;
  throw std::invalid_argument("unknown data order '" + std::string(s) + "'");
}

std::vector<LabelledItem> order_stream(std::span<const LabelledItem> items, DataOrder order,
                                       Rng& rng) {
  std::vector<LabelledItem> c0, c1;
  for (const auto& it : items) (it.true_class == 0 ? c0 : c1).push_back(it);

  std::vector<LabelledItem> out;
  out.reserve(items.size());
  switch (order) {
    case DataOrder::one_step:
      out.insert(out.end(), c0.begin(), c0.end());
      out.insert(out.end(), c1.begin(), c1.end());
      break;
    case DataOrder::two_step: {
      const auto half = static_cast<std::ptrdiff_t>((c0.size() + 1) / 2);
      out.insert(out.end(), c0.begin(), c0.begin() + half);
      out.insert(out.end(), c1.begin(), c1.end());
      out.insert(out.end(), c0.begin() + half, c0.end());
      break;
    }
    case DataOrder::random:
      out.assign(items.begin(), items.end());
      rng.shuffle(out);
      break;
  }
  return out;
}

std::map<AntigenLabel, int> truth_of(std::span<const LabelledItem> items) {
  std::map<AntigenLabel, int> t;
  for (const auto& it : items) t.emplace(it.id, it.true_class);
  return t;
}

BcRunResult run_bc_experiment(std::span<const LabelledItem> items, const BcOptions& options) {
  options.mapping.validate();
  options.population.validate();

  Rng master(options.population.seed);
  BcRunResult result;
  result.position_context.assign(items.size(), 0.0);
  std::vector<std::size_t> position_hits(items.size(), 0);

  for (std::size_t rep = 0; rep < options.repeats; ++rep) {
    const auto stream = order_stream(items, options.order, master);
    if (rep == 0) {
      for (const auto& it : stream) result.position_class.push_back(it.true_class);
    }
    PopulationConfig pop = options.population;
    pop.seed = master.next_seed();
    Tissue tissue(pop);

    std::vector<MigrationRecord> log;
    for (const auto& it : stream) {
      tissue.deposit(it.id);
      tissue.set_signals(item_to_signals(it, options.mapping));
      auto records = tissue.run_tick();
      log.insert(log.end(), std::make_move_iterator(records.begin()),
                 std::make_move_iterator(records.end()));
    }

    const VerdictMap run_verdicts = aggregate(log);
    for (std::size_t pos = 0; pos < stream.size(); ++pos) {
      const auto it = run_verdicts.find(stream[pos].id);
      if (it == run_verdicts.end()) continue;
      if (const auto mcav = it->second.mean_context()) {
        result.position_context[pos] += *mcav;
        ++position_hits[pos];
      }
    }
    accumulate(result.verdicts, log);
    result.ingestions_per_repeat.push_back(tissue.total_ingestions());
    result.migrations_per_repeat.push_back(tissue.total_migrations());
    if (options.keep_logs) result.logs.push_back(std::move(log));
  }

  for (std::size_t pos = 0; pos < items.size(); ++pos) {
    result.position_context[pos] = position_hits[pos]
                                       ? result.position_context[pos] / position_hits[pos]
                                       : std::nan("");
  }
  result.verdicts = classify(std::move(result.verdicts), options.threshold);
  result.errors = count_errors(result.verdicts, truth_of(items));
  return result;
}

}  // namespace dca
