#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

const std::string kCli = DCA_CLI;

int run(const std::string& args) {
  const int rc = std::system((kCli + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dca-cli-test-" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = slurp(e.path());
  }
  return out;
}

std::size_t lines(const fs::path& p) {
  const auto s = slurp(p);
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("bc with the documented flags") {
  const auto out = scratch("bc");
  REQUIRE(run("bc --order one-step --repeats 20 --threshold 0.65 --out " + out.string()) == 0);
  CHECK(fs::exists(out / "summary.tsv"));
  CHECK(fs::exists(out / "summary.txt"));
  CHECK(fs::exists(out / "verdicts.tsv"));
  CHECK(fs::exists(out / "migrations" / "repeat-20.log"));
  const auto manifest = slurp(out / "manifest.txt");
  CHECK(manifest.find("repeats = 20") != std::string::npos);
  CHECK(manifest.find("population.sample_multiplicity = 10") != std::string::npos);
  CHECK(manifest.find("# version = ") != std::string::npos);
}

TEST_CASE("same seed gives byte-identical outputs") {
  const auto out = scratch("determinism");
  REQUIRE(run("bc --repeats 2 --seed 7 --out " + out.string()) == 0);
  const auto first = snapshot(out);
  REQUIRE(run("bc --repeats 2 --seed 7 --out " + out.string()) == 0);
  CHECK(snapshot(out) == first);
  REQUIRE(run("bc --repeats 2 --seed 8 --out " + out.string()) == 0);
  CHECK_FALSE(snapshot(out) == first);
}

TEST_CASE("manifest reproduces the run") {
  const auto out = scratch("manifest");
  REQUIRE(run("bc --repeats 2 --seed 3 --order two-step --out " + out.string()) == 0);
  const auto first = snapshot(out);
  const auto cfg = out.string() + ".cfg";
  fs::copy_file(out / "manifest.txt", cfg, fs::copy_options::overwrite_existing);
  fs::remove_all(out);
  REQUIRE(run("bc --config " + cfg) == 0);
  CHECK(snapshot(out) == first);
}

TEST_CASE("threshold sweep writes one summary row per setting") {
  const auto out = scratch("sweep");
  REQUIRE(run("bc --repeats 1 --sweep-migration 1,5,10,15,var --out " + out.string()) == 0);
  CHECK(lines(out / "summary.tsv") == 6);
  CHECK(fs::exists(out / "verdicts-threshold-var.tsv"));
}

TEST_CASE("bad inputs exit non-zero") {
  const auto out = scratch("bad");
  fs::create_directories(out);
  std::ofstream(out / "bad.data") << "1,2,3\n";
  CHECK(run("bc --dataset " + (out / "bad.data").string() + " --out " + out.string()) != 0);
  CHECK(run("bc --order sideways --out " + out.string()) != 0);
  CHECK(run("portscan --set weights.mat.safe=nan --out " + out.string()) != 0);
  CHECK(run("replay --out " + out.string()) != 0);
  CHECK(run("replay --log " + (out / "missing.log").string() + " --out " + out.string()) != 0);
  CHECK(run("bc --config " + (out / "missing.cfg").string()) != 0);
  CHECK(run("") != 0);
}

TEST_CASE("portscan writes per-experiment tables") {
  const auto out = scratch("portscan");
  REQUIRE(run("portscan --repeats 2 --out " + out.string()) == 0);
  for (int e = 1; e <= 4; ++e) CHECK(fs::exists(out / ("processes-exp" + std::to_string(e) + ".tsv")));
  CHECK(lines(out / "summary.tsv") == 5);
}

TEST_CASE("generate, replay and report") {
  const auto out = scratch("replay");
  const std::string short_run =
      " --set scenario.login=1 --set scenario.scan=1 --set scenario.pause=1"
      " --set scenario.transfer=1 --set scenario.close=1";
  REQUIRE(run("generate --seed 4 --out " + out.string() + short_run) == 0);
  const auto log = (out / "events.log").string();
  REQUIRE(fs::exists(log));

  REQUIRE(run("replay --rate max --seed 2 --log " + log + " --out " + (out / "max").string()) == 0);
  REQUIRE(run("replay --rate 1 --seed 2 --log " + log + " --out " + (out / "one").string()) == 0);
  CHECK(slurp(out / "max" / "migrations.log") == slurp(out / "one" / "migrations.log"));
  CHECK(slurp(out / "max" / "processes.tsv") == slurp(out / "one" / "processes.tsv"));

  REQUIRE(run("report --migrations " + (out / "max" / "migrations.log").string() + " --events " + log +
              " --out " + (out / "report").string()) == 0);
  CHECK(slurp(out / "report" / "processes.tsv") == slurp(out / "max" / "processes.tsv"));
}

TEST_CASE("serve then remote replay reproduces local results") {
  const auto out = scratch("serve");
  REQUIRE(run("generate --seed 5 --out " + out.string()) == 0);
  const auto log = (out / "events.log").string();
  REQUIRE(run("replay --seed 6 --log " + log + " --out " + (out / "local").string()) == 0);

  const std::string cmd = kCli + " serve --seed 6 --port 0 --sessions 1 --out " + (out / "server").string();
  FILE* server = popen(cmd.c_str(), "r");
  REQUIRE(server);
  char buf[256] = {};
  REQUIRE(fgets(buf, sizeof buf, server));
  const std::string first(buf);
  const auto colon = first.rfind(':');
  REQUIRE(colon != std::string::npos);
  const std::string port = first.substr(colon + 1, first.find_last_not_of("\r\n") - colon);

  CHECK(run("replay --log " + log + " --connect 127.0.0.1:" + port) == 0);
  while (fgets(buf, sizeof buf, server)) {
  }
  CHECK(WEXITSTATUS(pclose(server)) == 0);
  CHECK(slurp(out / "server" / "session-01" / "migrations.log") == slurp(out / "local" / "migrations.log"));
  CHECK(run("replay --log " + log + " --connect 127.0.0.1:" + port) != 0);
}
