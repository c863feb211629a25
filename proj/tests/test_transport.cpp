#include "dca/replay.hpp"
#include "dca/scenario.hpp"
#include "dca/transport.hpp"

#include <doctest.h>

#include <algorithm>
#include <future>

using namespace dca;

namespace {

PopulationConfig population(std::uint64_t seed) {
  auto p = PopulationConfig::portscan();
  p.seed = seed;
  return p;
}

std::vector<Event> scenario_events(std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.seed = seed;
  cfg.durations = {5, 10, 5, 4, 3};
  return generate_scenario(cfg).events;
}

std::vector<MigrationRecord> in_process(const std::vector<Event>& events, std::uint64_t seed) {
  TissueEngine engine(population(seed));
  for (const auto& e : events) engine.accept(e);
  engine.finish();
  return engine.records();
}

struct Session {
  std::unique_ptr<TissueEngine> engine;
  SessionStats stats;
};

std::future<Session> start(TissueServer& server) {
  return std::async(std::launch::async, [&server] {
    Session s;
    s.engine = server.run_session({}, &s.stats);
    return s;
  });
}

}  // namespace

TEST_CASE("frame encoding") {
  const auto f = encode_frame("abc");
  REQUIRE(f.size() == 7);
  CHECK(decode_length(reinterpret_cast<const unsigned char*>(f.data())) == 3);
  CHECK(f.substr(4) == "abc");
  CHECK(f[0] == 0);
  CHECK(encode_frame(std::string(kMaxFrame, 'x')).size() == kMaxFrame + 4);
  CHECK_THROWS_AS(encode_frame(std::string(kMaxFrame + 1, 'x')), TransportError);
  const unsigned char big[4] = {0x01, 0x02, 0x03, 0x04};
  CHECK(decode_length(big) == 0x01020304u);
}

TEST_CASE("one client over the wire matches in-process delivery") {
  const auto events = scenario_events(11);
  TissueServer server(population(3), {});
  auto fut = start(server);
  RemoteSink sink("127.0.0.1", server.port());
  const auto r = replay(events, ReplayRate::max(), sink);
  CHECK(r.ok());
  auto s = fut.get();
  CHECK(s.stats.frames == events.size());
  CHECK(s.engine->records() == in_process(events, 3));
}

TEST_CASE("signal and antigen clients merge by timestamp") {
  const auto events = scenario_events(12);
  std::vector<Event> signals, antigen;
  for (const auto& e : events) (e.is_signal() ? signals : antigen).push_back(e);

  ServerOptions opts;
  opts.expected_clients = 2;
  TissueServer server(population(4), opts);
  auto fut = start(server);
  RemoteSink a("127.0.0.1", server.port());
  RemoteSink b("127.0.0.1", server.port());
  // Interleave the two streams in chunks so neither finishes first.
  std::size_t i = 0, j = 0;
  while (i < signals.size() || j < antigen.size()) {
    for (int k = 0; k < 3 && i < signals.size(); ++k) a.deliver(signals[i++]);
    for (int k = 0; k < 7 && j < antigen.size(); ++k) b.deliver(antigen[j++]);
  }
  a.close();
  b.close();
  auto s = fut.get();

  std::vector<Event> merged = signals;
  merged.insert(merged.end(), antigen.begin(), antigen.end());
  std::stable_sort(merged.begin(), merged.end(),
                   [](const Event& x, const Event& y) { return x.timestamp < y.timestamp; });
  CHECK(s.engine->records() == in_process(merged, 4));
}

TEST_CASE("oversized frame drops only that client") {
  const auto events = scenario_events(13);
  ServerOptions opts;
  opts.expected_clients = 2;
  std::vector<std::string> log;
  std::mutex mu;
  opts.log = [&](const std::string& m) {
    std::lock_guard lk(mu);
    log.push_back(m);
  };
  TissueServer server(population(5), opts);
  auto fut = start(server);
  RemoteSink bad("127.0.0.1", server.port());
  RemoteSink good("127.0.0.1", server.port());
  bad.send_frame_unchecked(std::string(kMaxFrame + 1, 'x'));
  for (const auto& e : events) good.deliver(e);
  good.close();
  auto s = fut.get();
  CHECK(s.stats.protocol_errors == 1);
  CHECK(s.engine->records() == in_process(events, 5));
  CHECK(std::any_of(log.begin(), log.end(), [](auto& m) { return m.find("exceeds") != std::string::npos; }));
}

TEST_CASE("partial frame at disconnect is discarded") {
  const auto events = scenario_events(14);
  TissueServer server(population(6), {});
  auto fut = start(server);
  {
    RemoteSink sink("127.0.0.1", server.port());
    for (const auto& e : events) sink.deliver(e);
    const auto frame = encode_frame(format_event(signal_event(1e6, {})));
    sink.send_raw(frame.substr(0, frame.size() / 2));
  }
  auto s = fut.get();
  CHECK(s.stats.partial_frames == 1);
  CHECK(s.stats.frames == events.size());
  CHECK(s.engine->records() == in_process(events, 6));
}

TEST_CASE("malformed frame is a protocol error") {
  TissueServer server(population(7), {});
  auto fut = start(server);
  RemoteSink sink("127.0.0.1", server.port());
  sink.deliver(signal_event(0, {1, 1, 1, 0}));
  sink.send_frame_unchecked("not an event");
  sink.close();
  auto s = fut.get();
  CHECK(s.stats.protocol_errors == 1);
  CHECK(s.stats.frames == 1);
}

TEST_CASE("refused connection") {
  std::uint16_t port;
  {
    TissueServer probe(population(1), {});
    port = probe.port();
  }
  CHECK_THROWS_AS(RemoteSink("127.0.0.1", port), TransportError);
}
