#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hedac/cli.hpp"

namespace fs = std::filesystem;
using namespace hedac;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(std::initializer_list<std::string> args) {
  std::vector<std::string> store{"hedac_search"};
  store.insert(store.end(), args);
  std::vector<char*> argv;
  for (std::string& s : store) argv.push_back(s.data());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string config(const std::string& name) { return (fs::path(HEDAC_CONFIG_DIR) / name).string(); }

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hedac_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("validate-config") {
  for (const char* name : {"test1.json", "test2.json", "test3.json", "desk_test1.json", "desk_test2.json",
                           "desk_test3.json"}) {
    const Outcome o = cli({"validate-config", "--config", config(name)});
    CHECK_MESSAGE(o.code == 0, name << ": " << o.err);
  }
  const Outcome bad = cli({"validate-config", "--config", config("test1.json"), "--set", "dt=-1"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("dt") != std::string::npos);
  CHECK(cli({"validate-config", "--config", "/nonexistent.json"}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
}

TEST_CASE("run is reproducible without timing") {
  const fs::path a = fresh_dir("run_a"), b = fresh_dir("run_b");
  for (const fs::path& d : {a, b}) {
    const Outcome o = cli({"run", "--config", config("test1.json"), "--set", "scale=0.1", "--set", "t_end=20",
                           "--out", d.string(), "--no-timing", "--snapshot-every", "20"});
    REQUIRE_MESSAGE(o.code == 0, o.err);
  }
  const auto manifest = nlohmann::json::parse(slurp(a / "manifest.json"));
  REQUIRE(manifest["files"].size() >= 5);
  for (const auto& f : manifest["files"]) {
    const std::string name = f["path"];
    CHECK(fs::exists(a / name));
    CHECK_MESSAGE(slurp(a / name) == slurp(b / name), name);
  }
  CHECK(fs::exists(a / "occurrence_40.txt"));
  CHECK(slurp(a / "run_0.csv").rfind("t,E,D,step_ms\n", 0) == 0);

  const Outcome again = cli({"run", "--config", config("test1.json"), "--set", "scale=0.1", "--out", a.string()});
  CHECK(again.code == 2);
  CHECK(cli({"run", "--config", config("test1.json"), "--set", "scale=0.1", "--set", "t_end=5", "--out", a.string(),
             "--force"})
            .code == 0);
}

TEST_CASE("ensemble and scale outputs") {
  const fs::path e = fresh_dir("ensemble");
  const Outcome o = cli({"ensemble", "--config", config("test1.json"), "--set", "scale=0.1", "--set", "t_end=10",
                         "--runs", "3", "--out", e.string()});
  REQUIRE_MESSAGE(o.code == 0, o.err);
  CHECK(fs::exists(e / "envelope.csv"));
  CHECK(fs::exists(e / "run_2.csv"));
  const auto summary = nlohmann::json::parse(slurp(e / "summary.json"));
  CHECK(summary["runs"] == 3);

  const fs::path s = fresh_dir("scale");
  const Outcome sc = cli({"scale", "--config", config("test1.json"), "--set", "scale=0.1", "--set", "n_agents=1",
                          "--set", "t_end=200", "--runs", "2", "--Ns", "1,2", "--out", s.string()});
  REQUIRE_MESSAGE(sc.code == 0, sc.err);
  const std::string table = slurp(s / "scale.csv");
  CHECK(table.rfind("N,t90,T90,eta\n1,", 0) == 0);
  CHECK(table.find("\n2,") != std::string::npos);
  CHECK(cli({"scale", "--config", config("test1.json"), "--Ns", "0", "--out", fresh_dir("scale0").string()}).code ==
        2);
}

}
