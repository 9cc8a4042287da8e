#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dps/cli.hpp"

using namespace dps;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("dps_cli_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

std::string slurp(const std::string& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json load_json(const std::string& p) { return json::parse(slurp(p)); }

int run(std::initializer_list<std::string> args) {
  return cli_main(std::vector<std::string>(args));
}

}  // namespace

TEST_CASE("cli list and usage errors") {
  CHECK(run({"list"}) == 0);
  CHECK(run({"unknown-subcommand"}) == 1);
  CHECK(run({"profile"}) == 1);  // missing required flags
  CHECK(run({"--help"}) == 0);
}

TEST_CASE("cli profile is reproducible and honors --bits") {
  TempDir tmp;
  CHECK(run({"profile", "--workload", "synthetic_additive", "--seed", "7",
             "--out-prefix", tmp.file("a")}) == 0);
  CHECK(run({"profile", "--workload", "synthetic_additive", "--seed", "7",
             "--out-prefix", tmp.file("b")}) == 0);
  CHECK(slurp(tmp.file("a.s0.csv")) == slurp(tmp.file("b.s0.csv")));
  CHECK(slurp(tmp.file("a.s1.csv")) == slurp(tmp.file("b.s1.csv")));

  CHECK(run({"profile", "--workload", "synthetic_additive", "--bits", "8",
             "--out-prefix", tmp.file("narrow")}) == 0);
  std::istringstream header(slurp(tmp.file("narrow.s0.csv")));
  std::string line;
  std::getline(header, line);  // fingerprint comment
  std::getline(header, line);
  CHECK(line == "call,static_fn,bit0,bit1,bit2,bit3,bit4,bit5,bit6,bit7");

  CHECK(run({"profile", "--workload", "nope", "--out-prefix", tmp.file("x")}) == 1);
  CHECK(run({"profile", "--workload", "synthetic_additive", "--out-prefix",
             "/nonexistent/dir/x"}) == 2);
}

TEST_CASE("cli plan policies and flag validation") {
  TempDir tmp;
  REQUIRE(run({"profile", "--workload", "synthetic_additive", "--out-prefix",
               tmp.file("m")}) == 0);

  CHECK(run({"plan", "--matrices", tmp.file("m"), "--policy", "dps", "--target",
             "0.1", "--out", tmp.file("dps.json")}) == 0);
  CHECK(run({"plan", "--matrices", tmp.file("m"), "--policy", "dps+", "--target",
             "0.1", "--out", tmp.file("dpsp.json")}) == 0);
  CHECK(run({"plan", "--matrices", tmp.file("m"), "--policy", "sps+", "--target",
             "0.1", "--out", tmp.file("spsp.json")}) == 0);
  CHECK(run({"plan", "--matrices", tmp.file("m"), "--policy", "sps", "--fraction",
             "0.25", "--out", tmp.file("sps.json")}) == 0);

  // dps+ never exceeds dps, pointwise
  const auto dps = load_json(tmp.file("dps.json"))["omitted"];
  const auto dpsp = load_json(tmp.file("dpsp.json"))["omitted"];
  REQUIRE(dps.size() == dpsp.size());
  for (std::size_t i = 0; i < dps.size(); ++i)
    CHECK(dpsp[i].get<int>() <= dps[i].get<int>());

  // ceil(0.25 * 23) = 6 everywhere
  for (const auto& v : load_json(tmp.file("sps.json"))["omitted"])
    CHECK(v.get<int>() == 6);

  CHECK(run({"plan", "--matrices", tmp.file("m"), "--policy", "sps", "--out",
             tmp.file("x.json")}) == 1);  // sps without --fraction
  CHECK(run({"plan", "--matrices", tmp.file("m"), "--policy", "dps", "--out",
             tmp.file("x.json")}) == 1);  // dps without --target
  CHECK(run({"plan", "--matrices", tmp.file("m"), "--policy", "bogus", "--target",
             "0.1", "--out", tmp.file("x.json")}) == 1);
  CHECK(run({"plan", "--matrices", tmp.file("missing"), "--policy", "dps",
             "--target", "0.1", "--out", tmp.file("x.json")}) == 2);
}

TEST_CASE("cli run: zero schedule reports zero loss and zero savings") {
  TempDir tmp;
  REQUIRE(run({"profile", "--workload", "synthetic_additive", "--out-prefix",
               tmp.file("m")}) == 0);
  REQUIRE(run({"plan", "--matrices", tmp.file("m"), "--policy", "dps", "--target",
               "0", "--out", tmp.file("zero.json")}) == 0);
  REQUIRE(run({"run", "--workload", "synthetic_additive", "--schedule",
               tmp.file("zero.json"), "--out", tmp.file("rep.json")}) == 0);
  const json rep = load_json(tmp.file("rep.json"));
  CHECK(rep["accuracy"]["mre"].get<double>() == 0.0);
  CHECK(rep["energy"]["savings"].get<double>() == 0.0);
  CHECK(rep["schedule"]["policy"] == "dps");
  CHECK(rep["workload"]["calls"].get<int>() == 8);

  // report json round-trips losslessly
  const std::string dumped = rep.dump(2);
  CHECK(json::parse(dumped) == rep);
}

TEST_CASE("cli run rejects schedules from a different call count") {
  TempDir tmp;
  json j;
  j["provenance"] = {{"policy", "dps"}, {"target", 0.1}, {"fraction", 0.0},
                     {"matrix_fingerprint", ""}};
  j["static_fns"] = json::array();
  j["omitted"] = {0, 0, 0};  // synthetic_additive has 8 calls
  {
    std::ofstream f(tmp.file("bad.json"));
    f << j.dump();
  }
  CHECK(run({"run", "--workload", "synthetic_additive", "--schedule",
             tmp.file("bad.json"), "--out", tmp.file("rep.json")}) == 2);

  // right length, but planned for a wider mantissa than this workload has
  j["omitted"] = {52, 0, 0, 0, 0, 0, 0, 0};
  {
    std::ofstream f(tmp.file("wide.json"));
    f << j.dump();
  }
  CHECK(run({"run", "--workload", "synthetic_additive", "--schedule",
             tmp.file("wide.json"), "--out", tmp.file("rep.json")}) == 2);
}

TEST_CASE("cli sweep produces one row per policy and target") {
  TempDir tmp;
  CHECK(run({"sweep", "--workload", "synthetic_additive", "--out",
             tmp.file("sweep.csv")}) == 0);
  std::istringstream csv(slurp(tmp.file("sweep.csv")));
  std::string line;
  std::getline(csv, line);
  CHECK(line ==
        "workload,policy,target,mre,energy_savings,total_energy_nj,"
        "baseline_energy_nj,mean_omitted,max_omitted");
  int rows = 0;
  int target_cols = 0;
  while (std::getline(csv, line)) {
    ++rows;
    if (line.find(",0.05000000000000000") != std::string::npos) ++target_cols;
  }
  CHECK(rows == 3 * 4);  // dps, dps+, sps+ x four default targets
  CHECK(target_cols == 3);

  CHECK(run({"sweep", "--workload", "synthetic_additive", "--policies", "sps",
             "--out", tmp.file("x.csv")}) == 1);
  CHECK(run({"sweep", "--workload", "synthetic_additive", "--targets", "oops",
             "--out", tmp.file("x.csv")}) == 1);
}

TEST_CASE("cli report emits heatmap, series, and histogram") {
  TempDir tmp;
  REQUIRE(run({"profile", "--workload", "synthetic_additive", "--out-prefix",
               tmp.file("m")}) == 0);
  REQUIRE(run({"plan", "--matrices", tmp.file("m"), "--policy", "dps", "--target",
               "0.1", "--out", tmp.file("s.json")}) == 0);
  REQUIRE(run({"run", "--workload", "synthetic_additive", "--schedule",
               tmp.file("s.json"), "--out", tmp.file("rep.json")}) == 0);

  CHECK(run({"report", "--matrices", tmp.file("m"), "--run-reports",
             tmp.file("rep.json"), "--out-dir", tmp.file("art")}) == 0);
  // heatmap: one row per call, one column per bit
  std::istringstream heat(slurp(tmp.file("art/heatmap.csv")));
  std::string line;
  std::getline(heat, line);
  int commas = 0;
  for (char c : line) commas += c == ',';
  CHECK(commas == 1 + 23);
  int rows = 0;
  while (std::getline(heat, line)) rows += !line.empty();
  CHECK(rows == 8);

  std::istringstream histo(slurp(tmp.file("art/histogram.csv")));
  std::getline(histo, line);
  CHECK(line == "report,threshold,fraction_below,bucket_fraction");
  rows = 0;
  while (std::getline(histo, line)) rows += !line.empty();
  CHECK(rows == 4);  // default thresholds

  CHECK(run({"report", "--matrices", tmp.file("m"), "--format", "json",
             "--out-dir", tmp.file("artj")}) == 0);
  const json heatmap = load_json(tmp.file("artj/heatmap.json"));
  CHECK(heatmap["max_loss"].size() == 8);
  CHECK(heatmap["max_loss"][0].size() == 23);

  CHECK(run({"report", "--out-dir", tmp.file("x")}) == 1);  // nothing to report
}

TEST_CASE("cli config overrides flow into the reports") {
  TempDir tmp;
  {
    std::ofstream f(tmp.file("wb.cfg"));
    f << "# test overrides\nepi_rf = 1.5\nepi_scaling = mantissa\nl1_size = 16384\n";
  }
  REQUIRE(run({"profile", "--workload", "synthetic_additive", "--out-prefix",
               tmp.file("m")}) == 0);
  REQUIRE(run({"plan", "--matrices", tmp.file("m"), "--policy", "dps", "--target",
               "0.1", "--out", tmp.file("s.json")}) == 0);
  REQUIRE(run({"run", "--workload", "synthetic_additive", "--schedule",
               tmp.file("s.json"), "--config", tmp.file("wb.cfg"), "--out",
               tmp.file("rep.json")}) == 0);
  const json rep = load_json(tmp.file("rep.json"));
  CHECK(rep["energy"]["epi"]["rf"].get<double>() == 1.5);
  CHECK(rep["energy"]["scaling"] == "mantissa");
  CHECK(rep["cache"]["l1_size"].get<int>() == 16384);

  {
    std::ofstream f(tmp.file("bad.cfg"));
    f << "no_such_key = 1\n";
  }
  CHECK(run({"run", "--workload", "synthetic_additive", "--schedule",
             tmp.file("s.json"), "--config", tmp.file("bad.cfg")}) == 2);
}

TEST_CASE("cli end-to-end determinism") {
  TempDir tmp;
  for (const char* tag : {"p1", "p2"}) {
    const std::string prefix = tmp.file(tag);
    REQUIRE(run({"profile", "--workload", "pagerank", "--seed", "9", "--bits", "10",
                 "--out-prefix", prefix}) == 0);
    REQUIRE(run({"plan", "--matrices", prefix, "--policy", "dps+", "--target",
                 "0.1", "--out", prefix + ".sched.json"}) == 0);
    REQUIRE(run({"run", "--workload", "pagerank", "--seed", "9", "--schedule",
                 prefix + ".sched.json", "--out", prefix + ".rep.json"}) == 0);
  }
  CHECK(slurp(tmp.file("p1.s0.csv")) == slurp(tmp.file("p2.s0.csv")));
  CHECK(slurp(tmp.file("p1.s1.csv")) == slurp(tmp.file("p2.s1.csv")));
  CHECK(slurp(tmp.file("p1.sched.json")) == slurp(tmp.file("p2.sched.json")));
  CHECK(slurp(tmp.file("p1.rep.json")) == slurp(tmp.file("p2.rep.json")));
}

TEST_CASE("cli cross-input replay works when call counts line up") {
  TempDir tmp;
  // profile on the embedded graph, replay on an 8-cycle: both run 10
  // iterations, so the schedule transfers
  {
    std::ofstream f(tmp.file("cycle.txt"));
    for (int i = 0; i < 8; ++i) f << i << " " << (i + 1) % 8 << "\n";
  }
  REQUIRE(run({"profile", "--workload", "pagerank", "--bits", "6", "--out-prefix",
               tmp.file("m")}) == 0);
  REQUIRE(run({"plan", "--matrices", tmp.file("m"), "--policy", "dps", "--target",
               "0.1", "--out", tmp.file("s.json")}) == 0);
  CHECK(run({"run", "--workload", "pagerank", "--input", tmp.file("cycle.txt"),
             "--schedule", tmp.file("s.json"), "--out", tmp.file("rep.json")}) == 0);
  const json rep = load_json(tmp.file("rep.json"));
  CHECK(rep["workload"]["input"].get<std::string>() == tmp.file("cycle.txt"));
  CHECK(rep["workload"]["calls"].get<int>() == 10);

  // input files are only defined for pagerank
  CHECK(run({"run", "--workload", "hotspot", "--input", tmp.file("cycle.txt"),
             "--schedule", tmp.file("s.json")}) == 1);
}
