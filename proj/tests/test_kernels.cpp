#include <doctest.h>

#include <bit>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "dps/errors.hpp"
#include "dps/kernels.hpp"
#include "dps/metrics.hpp"
#include "reference_kernels.hpp"

using namespace dps;

namespace {

bool bitwise_equal(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b) {
  if (a.size() != b.size()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (std::bit_cast<std::uint64_t>(a[i]) != std::bit_cast<std::uint64_t>(b[i]))
      return false;
  return true;
}

WorkloadResult golden(const std::string& name, std::uint64_t seed = 42,
                      const WorkloadInput& input = WorkloadInput::embedded()) {
  return run_workload(name, IdentityTransform{}, seed, CacheConfig{}, input);
}

std::filesystem::path write_cycle_graph(int n) {
  auto path = std::filesystem::temp_directory_path() /
              ("dps_cycle_" + std::to_string(n) + ".txt");
  std::ofstream f(path);
  f << "# " << n << "-vertex cycle\n";
  for (int i = 0; i < n; ++i) f << i << " " << (i + 1) % n << "\n";
  return path;
}

}  // namespace

TEST_CASE("workload roster") {
  const auto& specs = list_workloads();
  CHECK(specs.size() == 5);
  bool has_pagerank = false;
  for (const auto& s : specs) has_pagerank |= s.name == "pagerank";
  CHECK(has_pagerank);
  // stable order
  const auto& again = list_workloads();
  for (std::size_t i = 0; i < specs.size(); ++i) CHECK(specs[i].name == again[i].name);
  CHECK(workload_spec("blackscholes").format == PrecisionFormat::single_precision());
  CHECK(workload_spec("hotspot").format == PrecisionFormat::double_precision());
  CHECK_THROWS_AS(workload_spec("fft"), std::invalid_argument);
}

TEST_CASE("golden runs are finite, deterministic, and sized as declared") {
  struct Expect {
    const char* name;
    Eigen::Index output_len;
    std::size_t calls;
  };
  const Expect table[] = {
      {"blackscholes", 64, 64},    {"hotspot", 256, 8},
      {"pagerank", 32, 10},        {"particlefilter_lite", 16, 40},
      {"synthetic_additive", 8, 8},
  };
  for (const auto& e : table) {
    CAPTURE(e.name);
    const auto a = golden(e.name);
    const auto b = golden(e.name);
    CHECK(a.output.values.size() == e.output_len);
    CHECK(a.trace.num_calls() == e.calls);
    CHECK(is_result_valid(a.output.values));
    CHECK(bitwise_equal(a.output.values, b.output.values));
    // dynamic-call indices count up from zero
    for (std::size_t i = 0; i < a.trace.num_calls(); ++i)
      CHECK(a.trace.calls[i].index == i);
  }
  // different seed -> different data
  CHECK_FALSE(bitwise_equal(golden("blackscholes", 1).output.values,
                            golden("blackscholes", 2).output.values));
}

TEST_CASE("identity runs match the untraced references bit for bit") {
  CHECK(bitwise_equal(golden("blackscholes").output.values, testref::blackscholes(42)));
  CHECK(bitwise_equal(golden("hotspot").output.values, testref::hotspot(42)));
  CHECK(bitwise_equal(golden("pagerank").output.values, testref::pagerank(42, nullptr)));
  CHECK(bitwise_equal(golden("particlefilter_lite").output.values,
                      testref::particlefilter(42)));
  CHECK(bitwise_equal(golden("synthetic_additive").output.values,
                      testref::synthetic_additive()));
}

TEST_CASE("instruction counts do not depend on the transformer") {
  for (const auto& spec : list_workloads()) {
    CAPTURE(spec.name);
    const auto id = golden(spec.name);
    TruncateTransform trunc{std::vector<int>(id.trace.num_calls(), 3)};
    const auto tr = run_workload(spec.name, trunc, 42, CacheConfig{});
    FaultTransform fault{{2, FaultPolarity::StuckAt1}, 0};
    const auto fl = run_workload(spec.name, fault, 42, CacheConfig{});

    REQUIRE(tr.trace.num_calls() == id.trace.num_calls());
    REQUIRE(fl.trace.num_calls() == id.trace.num_calls());
    for (std::size_t i = 0; i < id.trace.num_calls(); ++i) {
      CHECK(tr.trace.per_call[i] == id.trace.per_call[i]);
      CHECK(fl.trace.per_call[i] == id.trace.per_call[i]);
      CHECK(tr.trace.calls[i].static_fn == id.trace.calls[i].static_fn);
    }
    CHECK(tr.trace.ambient == id.trace.ambient);
  }
}

TEST_CASE("pagerank on a cycle settles at uniform rank") {
  const auto path = write_cycle_graph(8);
  const auto input = WorkloadInput::from_file("pagerank", path.string());
  const auto res = golden("pagerank", 42, input);
  REQUIRE(res.output.values.size() == 8);
  for (Eigen::Index i = 0; i < 8; ++i) {
    CHECK(res.output.values[i] == doctest::Approx(0.125).epsilon(1e-6));
    CHECK(res.output.values[i] == res.output.values[0]);  // symmetry, exact
  }
  CHECK(res.output.values.sum() == doctest::Approx(1.0).epsilon(1e-6));
  std::filesystem::remove(path);
}

TEST_CASE("pagerank conserves total rank") {
  const auto res = golden("pagerank");
  CHECK(res.output.values.sum() == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("hotspot per-iteration deltas shrink") {
  const auto deltas = testref::hotspot_max_deltas(42);
  REQUIRE(deltas.size() == 8);
  for (Eigen::Index i = 1; i < deltas.size(); ++i) CHECK(deltas[i] < deltas[i - 1]);
}

TEST_CASE("synthetic additive error structure") {
  const auto id = golden("synthetic_additive");
  const Eigen::Index calls = static_cast<Eigen::Index>(id.trace.num_calls());

  // truncating any sparse call never changes the output
  for (int i = 1; i < calls; ++i) {
    std::vector<int> sched(static_cast<std::size_t>(calls), 0);
    sched[static_cast<std::size_t>(i)] = 23;
    const auto r = run_workload("synthetic_additive", TruncateTransform{sched}, 42,
                                CacheConfig{});
    CHECK(bitwise_equal(r.output.values, id.output.values));
  }

  // truncating the dense call loses exactly the sum of its per-bit s0 losses
  for (int k : {4, 11, 23}) {
    std::vector<int> sched(static_cast<std::size_t>(calls), 0);
    sched[0] = k;
    const auto r = run_workload("synthetic_additive", TruncateTransform{sched}, 42,
                                CacheConfig{});
    const double together =
        mean_relative_error(r.output.values, id.output.values).mre;
    double summed = 0.0;
    for (int b = 0; b < k; ++b) {
      const auto f = run_workload("synthetic_additive",
                                  FaultTransform{{b, FaultPolarity::StuckAt0}, 0}, 42,
                                  CacheConfig{});
      summed += mean_relative_error(f.output.values, id.output.values).mre;
    }
    CHECK(together == doctest::Approx(summed).epsilon(1e-12));
  }
}

TEST_CASE("edge list loading") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto good = dir / "dps_good_graph.txt";
  {
    std::ofstream f(good);
    f << "# comment line\n0 1\n1 2  # trailing comment\n2 0\n\n";
  }
  const Graph g = load_edge_list(good.string());
  CHECK(g.num_vertices == 3);
  CHECK(g.out_edges[1] == std::vector<int>{2});

  const auto bad = dir / "dps_bad_graph.txt";
  {
    std::ofstream f(bad);
    f << "0 1\n2\n";
  }
  CHECK_THROWS_AS(load_edge_list(bad.string()), DataError);
  {
    std::ofstream f(bad);
    f << "0 -3\n";
  }
  CHECK_THROWS_AS(load_edge_list(bad.string()), DataError);
  CHECK_THROWS_AS(load_edge_list((dir / "dps_missing.txt").string()), DataError);
  CHECK_THROWS_AS(WorkloadInput::from_file("hotspot", good.string()),
                  std::invalid_argument);
  std::filesystem::remove(good);
  std::filesystem::remove(bad);
}

TEST_CASE("unknown workload and stray inputs are rejected") {
  CHECK_THROWS_AS(run_workload("nope", IdentityTransform{}, 0, CacheConfig{}),
                  std::invalid_argument);
  WorkloadInput in;
  in.graph = std::make_shared<Graph>();
  CHECK_THROWS_AS(run_workload("hotspot", IdentityTransform{}, 0, CacheConfig{}, in),
                  std::invalid_argument);
}
