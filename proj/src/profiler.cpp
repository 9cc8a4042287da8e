#include "dps/profiler.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>

#include "dps/errors.hpp"
#include "dps/metrics.hpp"

namespace dps {
namespace {

std::string format_loss(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_one(const AccLossMatrices& m, const Eigen::ArrayXXd& loss,
               const Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>& valid,
               const std::string& path, const char* polarity) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write matrix file: " + path);
  out << "# " << m.fingerprint << ";polarity=" << polarity << "\n";
  out << "call,static_fn";
  for (Eigen::Index b = 0; b < m.num_bits(); ++b) out << ",bit" << b;
  out << "\n";
  for (Eigen::Index i = 0; i < m.num_calls(); ++i) {
    out << i << "," << m.static_fns[static_cast<std::size_t>(i)];
    for (Eigen::Index b = 0; b < m.num_bits(); ++b) {
      out << ",";
      if (valid(i, b))
        out << format_loss(loss(i, b));
      else
        out << "NA";
    }
    out << "\n";
  }
}

struct ParsedMatrix {
  Eigen::ArrayXXd loss;
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> valid;
  std::vector<std::string> static_fns;
  std::string fingerprint;
};

ParsedMatrix load_one(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open matrix file: " + path);

  std::string line;
  std::string fingerprint;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  if (line.rfind("# ", 0) == 0) {
    fingerprint = line.substr(2);
    const auto pol = fingerprint.rfind(";polarity=");
    if (pol != std::string::npos) fingerprint.erase(pol);
    if (!std::getline(in, line)) throw DataError(path + ": missing header row");
  }
  if (line.rfind("call,static_fn", 0) != 0)
    throw DataError(path + ": bad header row");
  int num_bits = 0;
  for (char c : line) num_bits += c == ',';
  num_bits -= 1;  // static_fn column
  if (num_bits <= 0) throw DataError(path + ": no bit columns");

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> fns;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (static_cast<int>(cells.size()) != num_bits + 2)
      throw DataError(path + ": row with wrong column count");
    rows.push_back(std::move(cells));
  }
  if (rows.empty()) throw DataError(path + ": no data rows");

  ParsedMatrix pm;
  pm.fingerprint = fingerprint;
  const auto n = static_cast<Eigen::Index>(rows.size());
  pm.loss.setZero(n, num_bits);
  pm.valid.setConstant(n, num_bits, false);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& cells = rows[static_cast<std::size_t>(i)];
    try {
      if (std::stoll(cells[0]) != i)
        throw DataError(path + ": call indices must be consecutive from 0");
    } catch (const DataError&) {
      throw;
    } catch (const std::exception&) {
      throw DataError(path + ": malformed call index '" + cells[0] + "'");
    }
    pm.static_fns.push_back(cells[1]);
    for (int b = 0; b < num_bits; ++b) {
      const std::string& s = cells[static_cast<std::size_t>(b) + 2];
      if (s == "NA") continue;
      try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        // Anything that is not a finite non-negative number is invalid.
        if (used == s.size() && std::isfinite(v) && v >= 0.0) {
          pm.loss(i, b) = v;
          pm.valid(i, b) = true;
        }
      } catch (const std::exception&) {
        // leave invalid
      }
    }
  }
  return pm;
}

}  // namespace

std::string make_fingerprint(const std::string& workload, const std::string& input,
                             std::uint64_t seed, PrecisionFormat format, int bits) {
  std::ostringstream os;
  os << "workload=" << workload << ";input=" << input << ";seed=" << seed
     << ";format=" << format.name() << ";bits=" << bits;
  return os.str();
}

AccLossMatrices merge_results(const std::vector<ExperimentResult>& results,
                              int num_calls, int num_bits,
                              std::vector<std::string> static_fns,
                              std::string fingerprint) {
  if (static_cast<int>(static_fns.size()) != num_calls)
    throw DataError("merge_results: static_fns size does not match num_calls");

  AccLossMatrices m;
  m.s0.setZero(num_calls, num_bits);
  m.s1.setZero(num_calls, num_bits);
  m.s0_valid.setConstant(num_calls, num_bits, false);
  m.s1_valid.setConstant(num_calls, num_bits, false);
  m.static_fns = std::move(static_fns);
  m.fingerprint = std::move(fingerprint);

  std::vector<char> seen(static_cast<std::size_t>(num_calls) * num_bits * 2, 0);
  for (const auto& r : results) {
    if (r.call < 0 || r.call >= num_calls || r.bit < 0 || r.bit >= num_bits)
      throw DataError("merge_results: experiment key out of range");
    const std::size_t slot =
        (static_cast<std::size_t>(r.call) * num_bits + r.bit) * 2 +
        (r.polarity == FaultPolarity::StuckAt1 ? 1 : 0);
    if (seen[slot]) throw DataError("merge_results: duplicate experiment key");
    seen[slot] = 1;
    auto& loss = r.polarity == FaultPolarity::StuckAt0 ? m.s0 : m.s1;
    auto& valid = r.polarity == FaultPolarity::StuckAt0 ? m.s0_valid : m.s1_valid;
    if (r.valid) {
      loss(r.call, r.bit) = r.loss;
      valid(r.call, r.bit) = true;
    }
  }
  for (char s : seen)
    if (!s) throw DataError("merge_results: missing experiment key");
  return m;
}

ProfileOutcome profile(const ProfileRequest& req) {
  const WorkloadSpec& spec = workload_spec(req.workload);
  const int bits = req.num_bits == 0 ? spec.format.mantissa_bits : req.num_bits;
  if (bits < 1 || bits > spec.format.mantissa_bits)
    throw std::invalid_argument("profile: num_bits outside [1, mantissa_bits]");

  const WorkloadResult golden =
      run_workload(req.workload, IdentityTransform{}, req.seed, req.cache, req.input);
  if (!is_result_valid(golden.output.values))
    throw DataError("golden run produced non-finite output; workload unusable");

  const int num_calls = static_cast<int>(golden.trace.num_calls());
  std::vector<std::string> static_fns;
  static_fns.reserve(static_cast<std::size_t>(num_calls));
  for (const auto& c : golden.trace.calls) static_fns.push_back(c.static_fn);

  const std::size_t total = static_cast<std::size_t>(num_calls) * bits * 2;
  std::vector<ExperimentResult> results(total);
  std::atomic<std::uint64_t> runs{0};

  const int jobs = std::max(1, req.jobs);
  auto worker = [&](std::size_t first) {
    for (std::size_t e = first; e < total; e += static_cast<std::size_t>(jobs)) {
      const int call = static_cast<int>(e / (static_cast<std::size_t>(bits) * 2));
      const int rem = static_cast<int>(e % (static_cast<std::size_t>(bits) * 2));
      const int bit = rem / 2;
      const FaultPolarity pol =
          rem % 2 == 0 ? FaultPolarity::StuckAt0 : FaultPolarity::StuckAt1;

      FaultTransform ft{MantissaFault{bit, pol}, static_cast<std::size_t>(call)};
      const WorkloadResult run =
          run_workload(req.workload, ft, req.seed, req.cache, req.input);
      runs.fetch_add(1, std::memory_order_relaxed);

      ExperimentResult r{call, bit, pol, false, 0.0};
      if (is_result_valid(run.output.values)) {
        r.valid = true;
        r.loss = mean_relative_error(run.output.values, golden.output.values).mre;
      }
      results[e] = r;
    }
  };

  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::future<void>> futures;
    for (int j = 0; j < jobs; ++j)
      futures.push_back(std::async(std::launch::async, worker, static_cast<std::size_t>(j)));
    for (auto& f : futures) f.get();
  }

  ProfileOutcome out;
  out.matrices = merge_results(results, num_calls, bits, std::move(static_fns),
                               make_fingerprint(req.workload, req.input.descriptor,
                                                req.seed, spec.format, bits));
  out.fault_runs = runs.load();
  return out;
}

void write_matrices_csv(const AccLossMatrices& m, const std::string& prefix) {
  write_one(m, m.s0, m.s0_valid, prefix + ".s0.csv", "s0");
  write_one(m, m.s1, m.s1_valid, prefix + ".s1.csv", "s1");
}

AccLossMatrices load_matrices_csv(const std::string& prefix) {
  ParsedMatrix p0 = load_one(prefix + ".s0.csv");
  ParsedMatrix p1 = load_one(prefix + ".s1.csv");
  if (p0.loss.rows() != p1.loss.rows() || p0.loss.cols() != p1.loss.cols())
    throw DataError("matrix files disagree on shape");
  if (p0.static_fns != p1.static_fns)
    throw DataError("matrix files disagree on static functions");
  if (p0.fingerprint != p1.fingerprint)
    throw DataError("matrix files disagree on fingerprint");

  AccLossMatrices m;
  m.s0 = std::move(p0.loss);
  m.s1 = std::move(p1.loss);
  m.s0_valid = std::move(p0.valid);
  m.s1_valid = std::move(p1.valid);
  m.static_fns = std::move(p0.static_fns);
  m.fingerprint = std::move(p0.fingerprint);
  return m;
}

}  // namespace dps
