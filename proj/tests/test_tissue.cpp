#include "dca/tissue.hpp"

#include <doctest.h>

#include <map>
#include <sstream>

using namespace dca;

TEST_CASE("table defaults") {
  const auto bc = PopulationConfig::breast_cancer();
  CHECK(bc.num_cells == 100);
  CHECK(bc.cell_antigen_capacity == 50);
  CHECK(bc.tissue_antigen_capacity == 1);
  CHECK(bc.sampling_probability == 0.1);
  CHECK(bc.sample_multiplicity == 10);
  const auto& t = std::get<UniformThreshold>(bc.threshold);
  CHECK(t.lo == 5.0);
  CHECK(t.hi == 15.0);

  const auto ps = PopulationConfig::portscan();
  CHECK(ps.num_cells == 500);
  CHECK(ps.tissue_antigen_capacity == 500);
  CHECK(ps.sampling_probability == 1.0);
  CHECK(ps.sample_multiplicity == 1);
}

TEST_CASE("config validation") {
  auto c = PopulationConfig::breast_cancer();
  c.num_cells = 0;
  CHECK_THROWS(c.validate());
  c = PopulationConfig::breast_cancer();
  c.sampling_probability = 1.5;
  CHECK_THROWS(c.validate());
  c = PopulationConfig::breast_cancer();
  c.threshold = UniformThreshold{15, 5};
  CHECK_THROWS(c.validate());
}

TEST_CASE("capacity 1 overwrites") {
  TissueCompartment t(1);
  Rng rng(1);
  t.deposit(AntigenLabel("x"), 1, rng);
  t.deposit(AntigenLabel("y"), 1, rng);
  CHECK(t.slot(0) == AntigenLabel("y"));
  CHECK(t.occupied() == 1);
}

TEST_CASE("free slots fill first") {
  TissueCompartment t(500);
  Rng rng(1);
  CHECK(t.deposit(AntigenLabel("y"), 1, rng) == 0);
  CHECK(t.occupied() == 1);
}

TEST_CASE("full store overwrites a uniformly chosen slot") {
  int first = 0;
  const int trials = 10000;
  Rng rng(2024);
  for (int i = 0; i < trials; ++i) {
    TissueCompartment t(2);
    t.deposit(AntigenLabel("x"), 1, rng);
    t.deposit(AntigenLabel("y"), 1, rng);
    if (t.deposit(AntigenLabel("z"), 1, rng) == 0) ++first;
  }
  const double f = static_cast<double>(first) / trials;
  CHECK(f > 0.45);
  CHECK(f < 0.55);
}

TEST_CASE("sampling decrements the multiplicity") {
  TissueCompartment t(1);
  Rng rng(1);
  t.deposit(AntigenLabel("a"), 2, rng);
  CHECK(t.sample(0) == AntigenLabel("a"));
  CHECK(t.remaining(0) == 1);
  CHECK(t.sample(0) == AntigenLabel("a"));
  CHECK_FALSE(t.sample(0).has_value());
  CHECK(t.occupied() == 0);
}

TEST_CASE("signals: last write wins, then decay") {
  TissueCompartment t(1);
  t.set_signals({0, 0, 0, 0});
  CHECK(t.signals() == SignalVector{});
  t.set_signals({1, 2, 3, 0});
  t.set_signals({4, 5, 6, 1});
  CHECK(t.signals() == SignalVector{4, 5, 6, 1});
  t.decay();
  CHECK(t.signals() == SignalVector{});
  CHECK_THROWS(t.set_signals({-1, 0, 0, 0}));
}

TEST_CASE("idle tissue never migrates") {
  auto cfg = PopulationConfig::breast_cancer();
  cfg.num_cells = 1;
  Tissue tissue(cfg);
  for (int i = 0; i < 100; ++i) CHECK(tissue.run_tick().empty());
  CHECK(tissue.total_ingestions() == 0);
  CHECK(tissue.clock() == 100);
}

TEST_CASE("one antigen is sampled at most multiplicity times") {
  auto cfg = PopulationConfig::breast_cancer();
  cfg.sampling_probability = 1.0;
  cfg.threshold = FixedThreshold{1e9};
  Tissue tissue(cfg);
  tissue.deposit(AntigenLabel("only"));
  for (int i = 0; i < 20; ++i) tissue.run_tick();
  CHECK(tissue.total_ingestions() == 10);
}

TEST_CASE("constant P=50 migrates the whole threshold-10 pool on tick 1") {
  auto cfg = PopulationConfig::breast_cancer();
  cfg.threshold = FixedThreshold{10.0};
  Tissue tissue(cfg);
  tissue.set_signals({50, 0, 0, 0});
  const auto records = tissue.run_tick();
  CHECK(records.size() == 100);
  CHECK(tissue.pool().size() == 100);
  for (const auto& c : tissue.pool()) CHECK_FALSE(c.migrated());
  for (const auto& r : records) CHECK(r.context == Context::mature);
}

TEST_CASE("migration log round trip") {
  MigrationRecord r;
  r.tick = 7;
  r.cell_id = 12;
  r.context = Context::mature;
  r.antigens = {AntigenLabel("a"), AntigenLabel("a"), AntigenLabel("b")};
  r.final_cytokines = {10.5, 0.1 + 0.2, -3.0};
  r.migration_threshold = 9.87654321;
  MigrationRecord empty;
  std::stringstream ss;
  write_migration_log(ss, {r, empty});
  const auto back = read_migration_log(ss);
  REQUIRE(back.size() == 2);
  CHECK(back[0] == r);
  CHECK(back[1] == empty);
  CHECK_THROWS(parse_migration_record("1\t2\tbogus\t-\t1\t2\t3\t4", 3));
}

TEST_CASE("equal seeds give equal runs") {
  auto run = [](std::uint64_t seed) {
    auto cfg = PopulationConfig::breast_cancer();
    cfg.seed = seed;
    Tissue t(cfg);
    std::vector<MigrationRecord> all;
    for (int i = 0; i < 200; ++i) {
      t.deposit(AntigenLabel("i" + std::to_string(i)));
      t.set_signals({double(i % 7), 1.0, double(i % 3), 0});
      for (auto& r : t.run_tick()) all.push_back(r);
    }
    return all;
  };
  CHECK(run(5) == run(5));
  CHECK_FALSE(run(5) == run(6));
}
