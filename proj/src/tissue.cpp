#include "dca/tissue.hpp"

#include "dca/text.hpp"

#include <istream>
#include <ostream>
#include <string>

namespace dca {

void PopulationConfig::validate() const {
  if (num_cells == 0) throw std::invalid_argument("num_cells must be positive");
  if (cell_antigen_capacity == 0) {
    throw std::invalid_argument("cell_antigen_capacity must be positive");
  }
  if (tissue_antigen_capacity == 0) {
    throw std::invalid_argument("tissue_antigen_capacity must be positive");
  }
  if (!(sampling_probability >= 0.0 && sampling_probability <= 1.0)) {
    throw std::invalid_argument("sampling_probability must lie in [0, 1]");
  }
  if (sample_multiplicity == 0) {
    throw std::invalid_argument("sample_multiplicity must be positive");
  }
  std::visit(
      [](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, FixedThreshold>) {
          if (!(t.value > 0.0)) throw std::invalid_argument("threshold must be positive");
        } else {
          if (!(t.lo > 0.0) || !(t.lo <= t.hi)) {
            throw std::invalid_argument("threshold range needs 0 < lo <= hi");
          }
        }
      },
      threshold);
}

PopulationConfig PopulationConfig::breast_cancer() {
  PopulationConfig c;
  c.num_cells = 100;
  c.cell_antigen_capacity = 50;
  c.tissue_antigen_capacity = 1;
  c.sampling_probability = 0.10;
  c.sample_multiplicity = 10;
  c.threshold = UniformThreshold{5.0, 15.0};
  return c;
}

PopulationConfig PopulationConfig::portscan() {
  PopulationConfig c;
  c.num_cells = 500;
  c.cell_antigen_capacity = 50;
  c.tissue_antigen_capacity = 500;
  c.sampling_probability = 1.0;
  c.sample_multiplicity = 1;
  // Signals live on a 0-100 scale here, so baseline csm gain is ~20 per tick.
  c.threshold = UniformThreshold{20.0, 60.0};
  return c;
}

TissueCompartment::TissueCompartment(std::size_t capacity) : slots_(capacity) {
  if (capacity == 0) throw std::invalid_argument("tissue capacity must be positive");
  for (std::size_t i = 0; i < capacity; ++i) free_.insert(free_.end(), i);
}

std::size_t TissueCompartment::deposit(const AntigenLabel& a, std::size_t multiplicity,
                                       Rng& rng) {
  std::size_t idx;
  if (!free_.empty()) {
    idx = *free_.begin();
    free_.erase(free_.begin());
  } else {
    idx = rng.index(slots_.size());
  }
  slots_[idx].label = a;
  slots_[idx].remaining = multiplicity;
  return idx;
}

std::optional<AntigenLabel> TissueCompartment::sample(std::size_t slot) {
  auto& s = slots_.at(slot);
  if (!s.label) return std::nullopt;
  std::optional<AntigenLabel> out = s.label;
  if (--s.remaining == 0) {
    s.label.reset();
    free_.insert(slot);
  }
  return out;
}

void TissueCompartment::set_signals(const SignalVector& s) {
  if (!s.valid()) throw std::invalid_argument("signal vector out of range");
  signals_ = s;
}

Tissue::Tissue(PopulationConfig cfg) : Tissue(cfg, Rng(cfg.seed)) {}

Tissue::Tissue(PopulationConfig cfg, Rng rng)
    : cfg_(std::move(cfg)), rng_(std::move(rng)), compartment_(cfg_.tissue_antigen_capacity) {
  cfg_.validate();
  pool_.reserve(cfg_.num_cells);
  for (std::size_t i = 0; i < cfg_.num_cells; ++i) pool_.push_back(fresh_cell());
  order_.resize(cfg_.num_cells);
}

DendriticCell Tissue::fresh_cell() {
  const double threshold = std::visit(
      [this](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, FixedThreshold>) {
          return t.value;
        } else {
          return rng_.uniform(t.lo, t.hi);
        }
      },
      cfg_.threshold);
  return DendriticCell(next_id_++, threshold, cfg_.cell_antigen_capacity);
}

void Tissue::deposit(const AntigenLabel& a) {
  compartment_.deposit(a, cfg_.sample_multiplicity, rng_);
  ++deposits_;
}

void Tissue::set_signals(const SignalVector& s) { compartment_.set_signals(s); }

std::vector<MigrationRecord> Tissue::run_tick() {
  std::vector<MigrationRecord> out;
  const Eigen::Vector3d delta = fuse_signals(compartment_.signals(), cfg_.weights);

  for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
  rng_.shuffle(order_);

  for (const std::size_t idx : order_) {
    DendriticCell& cell = pool_[idx];
    if (rng_.bernoulli(cfg_.sampling_probability)) {
      const std::size_t slot = rng_.index(compartment_.capacity());
      if (cell.antigens().size() < cell.antigen_capacity() && compartment_.slot(slot)) {
        cell.ingest(*compartment_.sample(slot));
        ++ingestions_;
      }
    }
    cell.accumulate(delta);
    if (cell.migrated()) {
      Presentation p = cell.present();
      out.push_back(MigrationRecord{compartment_.clock(), cell.id(), p.context,
                                    std::move(p.antigens), cell.cytokines(),
                                    cell.migration_threshold()});
      ++migrations_;
      cell = fresh_cell();
    }
  }

  compartment_.decay();
  compartment_.advance();
  return out;
}

std::string format_migration_record(const MigrationRecord& r) {
  std::string line = std::to_string(r.tick);
  line += '\t';
  line += std::to_string(r.cell_id);
  line += '\t';
  line += to_string(r.context);
  line += '\t';
  if (r.antigens.empty()) {
    line += '-';
  } else {
    for (std::size_t i = 0; i < r.antigens.size(); ++i) {
      if (i) line += ',';
      line += r.antigens[i].str();
    }
  }
  for (double v : {r.final_cytokines.csm, r.final_cytokines.semi, r.final_cytokines.mat,
                   r.migration_threshold}) {
    line += '\t';
    line += format_double(v);
  }
  return line;
}

MigrationRecord parse_migration_record(std::string_view line, std::size_t line_no) {
  const auto f = split(line, '\t');
  if (f.size() != 8) {
    throw ParseError(line_no, "expected 8 tab-separated fields, got " + std::to_string(f.size()));
  }
  try {
    MigrationRecord r;
    r.tick = parse_uint(f[0]);
    r.cell_id = parse_uint(f[1]);
    if (f[2] == "mature") {
      r.context = Context::mature;
    } else if (f[2] == "semi") {
      r.context = Context::semi_mature;
    } else {
      throw std::invalid_argument("unknown context '" + std::string(f[2]) + "'");
    }
    if (f[3] != "-") {
      for (auto a : split(f[3], ',')) r.antigens.emplace_back(std::string(a));
    }
    r.final_cytokines = {parse_double(f[4]), parse_double(f[5]), parse_double(f[6])};
    r.migration_threshold = parse_double(f[7]);
    return r;
  } catch (const std::invalid_argument& e) {
    throw ParseError(line_no, e.what());
  }
}

void write_migration_log(std::ostream& os, const std::vector<MigrationRecord>& records) {
  for (const auto& r : records) os << format_migration_record(r) << '\n';
}

std::vector<MigrationRecord> read_migration_log(std::istream& is) {
  std::vector<MigrationRecord> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(is, line)) {
    ++n;
    if (line.empty()) continue;
    out.push_back(parse_migration_record(line, n));
  }
  return out;
}

}  // namespace dca
