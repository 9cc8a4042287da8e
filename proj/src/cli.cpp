#include "dps/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dps/energy.hpp"
#include "dps/errors.hpp"
#include "dps/metrics.hpp"
#include "dps/profiler.hpp"

namespace dps {
namespace {

using nlohmann::json;

const std::vector<double> kDefaultTargets = {0.05, 0.10, 0.15, 0.20};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

WorkbenchConfig config_or_default(const std::string& path) {
  return path.empty() ? WorkbenchConfig{} : load_config(path);
}

WorkloadInput input_for(const std::string& workload, const std::string& path) {
  return path.empty() ? WorkloadInput::embedded()
                      : WorkloadInput::from_file(workload, path);
}

json epi_json(const EpiTable& t) {
  return {{"rf", t.rf}, {"l1", t.l1}, {"l2", t.l2},
          {"mem_rd", t.mem_rd}, {"mem_wr", t.mem_wr}};
}

json cache_json(const CacheConfig& c) {
  return {{"l1_size", c.l1_size}, {"l2_size", c.l2_size}, {"line_size", c.line_size},
          {"l1_assoc", c.l1_assoc}, {"l2_assoc", c.l2_assoc}};
}

std::vector<double> parse_target_list(const std::string& csv) {
  std::vector<double> out;
  std::istringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad numeric list entry: '" + tok + "'");
    }
  }
  if (out.empty()) throw std::invalid_argument("empty numeric list");
  return out;
}

// ---- profile ----------------------------------------------------------

struct ProfileArgs {
  std::string workload, input, config, out_prefix;
  std::uint64_t seed = 0;
  int bits = 0;
  int jobs = 1;
};

void cmd_profile(const ProfileArgs& a) {
  const WorkbenchConfig cfg = config_or_default(a.config);
  ProfileRequest req;
  req.workload = a.workload;
  req.input = input_for(a.workload, a.input);
  req.seed = a.seed;
  req.num_bits = a.bits;
  req.jobs = a.jobs;
  req.cache = cfg.cache;

  const ProfileOutcome out = profile(req);
  write_matrices_csv(out.matrices, a.out_prefix);
  std::cout << "wrote " << a.out_prefix << ".s0.csv and " << a.out_prefix
            << ".s1.csv (" << out.matrices.num_calls() << " calls x "
            << out.matrices.num_bits() << " bits, " << out.fault_runs
            << " fault runs)\n";
}

// ---- plan -------------------------------------------------------------

struct PlanArgs {
  std::string matrices, policy, out;
  double target = -1.0;
  double fraction = -1.0;
};

void cmd_plan(const PlanArgs& a) {
  const AccLossMatrices m = load_matrices_csv(a.matrices);
  OmissionSchedule sched;
  if (a.policy == "sps") {
    if (a.fraction < 0.0)
      throw std::invalid_argument("policy sps requires --fraction");
    sched = plan_sps(a.fraction, static_cast<int>(m.num_bits()),
                     static_cast<int>(m.num_calls()));
    sched.matrix_fingerprint = m.fingerprint;
    sched.static_fns = m.static_fns;
  } else {
    if (a.target < 0.0)
      throw std::invalid_argument("policy " + a.policy + " requires --target");
    if (a.policy == "dps")
      sched = plan_dps(m, a.target);
    else if (a.policy == "dps+")
      sched = plan_dps_plus(m, a.target);
    else if (a.policy == "sps+")
      sched = plan_sps_plus(m, a.target);
    else
      throw std::invalid_argument("unknown policy: " + a.policy);
  }
  save_schedule(sched, a.out);
  std::cout << "wrote " << a.out << " (" << sched.num_calls() << " calls, mean omitted "
            << (sched.num_calls() ? sched.omitted.cast<double>().mean() : 0.0) << ")\n";
}

// ---- run --------------------------------------------------------------

struct RunArgs {
  std::string workload, input, schedule, config, out;
  std::uint64_t seed = 0;
};

void cmd_run(const RunArgs& a) {
  const WorkbenchConfig cfg = config_or_default(a.config);
  const WorkloadInput input = input_for(a.workload, a.input);
  const OmissionSchedule sched = load_schedule(a.schedule);

  const cli::RunOutcome out = cli::replay_schedule(a.workload, input, a.seed, sched,
                                                   cfg, kDefaultTargets);
  if (!a.out.empty()) {
    std::ofstream f(a.out);
    if (!f) throw DataError("cannot write report: " + a.out);
    f << out.report_json << "\n";
  }
  std::cout << "mre=" << num(out.mre) << " savings=" << num(out.savings)
            << " energy_nj=" << num(out.total_nj) << "\n";
}

// ---- sweep ------------------------------------------------------------

struct SweepArgs {
  std::string workload, input, config, out;
  std::string targets = "0.05,0.1,0.15,0.2";
  std::string policies = "dps,dps+,sps+";
  std::uint64_t seed = 0;
  int bits = 0;
  int jobs = 1;
};

void cmd_sweep(const SweepArgs& a) {
  const WorkbenchConfig cfg = config_or_default(a.config);
  const WorkloadInput input = input_for(a.workload, a.input);
  const std::vector<double> targets = parse_target_list(a.targets);

  std::vector<std::string> policies;
  {
    std::istringstream ss(a.policies);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok != "dps" && tok != "dps+" && tok != "sps+")
        throw std::invalid_argument(
            "sweep supports dps, dps+ and sps+ (use `plan --policy sps` for the "
            "static baseline)");
      policies.push_back(tok);
    }
    if (policies.empty()) throw std::invalid_argument("empty --policies list");
  }

  ProfileRequest req;
  req.workload = a.workload;
  req.input = input;
  req.seed = a.seed;
  req.num_bits = a.bits;
  req.jobs = a.jobs;
  req.cache = cfg.cache;
  const ProfileOutcome prof = profile(req);

  std::ofstream f(a.out);
  if (!f) throw DataError("cannot write sweep csv: " + a.out);
  f << "workload,policy,target,mre,energy_savings,total_energy_nj,baseline_energy_nj,"
       "mean_omitted,max_omitted\n";
  for (const auto& policy : policies) {
    for (double target : targets) {
      OmissionSchedule sched;
      if (policy == "dps")
        sched = plan_dps(prof.matrices, target);
      else if (policy == "dps+")
        sched = plan_dps_plus(prof.matrices, target);
      else
        sched = plan_sps_plus(prof.matrices, target);

      const cli::RunOutcome out =
          cli::replay_schedule(a.workload, input, a.seed, sched, cfg, targets);
      f << a.workload << "," << policy << "," << num(target) << "," << num(out.mre)
        << "," << num(out.savings) << "," << num(out.total_nj) << ","
        << num(out.baseline_nj) << ","
        << num(sched.num_calls() ? sched.omitted.cast<double>().mean() : 0.0) << ","
        << (sched.num_calls() ? sched.omitted.maxCoeff() : 0) << "\n";
    }
  }
  std::cout << "wrote " << a.out << " (" << policies.size() * targets.size()
            << " rows)\n";
}

// ---- report -----------------------------------------------------------

struct ReportArgs {
  std::string matrices, out_dir, format = "csv", thresholds;
  std::vector<std::string> run_reports;
};

void cmd_report(const ReportArgs& a) {
  if (a.matrices.empty() && a.run_reports.empty())
    throw std::invalid_argument("report needs --matrices and/or --run-reports");
  const std::vector<double> thresholds =
      a.thresholds.empty() ? kDefaultTargets : parse_target_list(a.thresholds);
  std::filesystem::create_directories(a.out_dir);
  const std::filesystem::path dir(a.out_dir);
  const bool as_json = a.format == "json";
  if (!as_json && a.format != "csv")
    throw std::invalid_argument("--format must be csv or json");

  if (!a.matrices.empty()) {
    // Worst-case loss per (call, bit): the heatmap behind the planners.
    const AccLossMatrices m = load_matrices_csv(a.matrices);
    if (as_json) {
      json j;
      j["fingerprint"] = m.fingerprint;
      j["static_fns"] = m.static_fns;
      json rows = json::array();
      for (Eigen::Index i = 0; i < m.num_calls(); ++i) {
        json row = json::array();
        for (Eigen::Index b = 0; b < m.num_bits(); ++b) {
          if (m.entry_valid(i, b))
            row.push_back(m.max_loss(i, b));
          else
            row.push_back(nullptr);
        }
        rows.push_back(std::move(row));
      }
      j["max_loss"] = std::move(rows);
      std::ofstream f(dir / "heatmap.json");
      f << j.dump(2) << "\n";
    } else {
      std::ofstream f(dir / "heatmap.csv");
      f << "call,static_fn";
      for (Eigen::Index b = 0; b < m.num_bits(); ++b) f << ",bit" << b;
      f << "\n";
      for (Eigen::Index i = 0; i < m.num_calls(); ++i) {
        f << i << "," << m.static_fns[static_cast<std::size_t>(i)];
        for (Eigen::Index b = 0; b < m.num_bits(); ++b) {
          f << ",";
          if (m.entry_valid(i, b))
            f << num(m.max_loss(i, b));
          else
            f << "NA";
        }
        f << "\n";
      }
    }
    std::cout << "wrote " << (dir / (as_json ? "heatmap.json" : "heatmap.csv")).string()
              << "\n";
  }

  if (!a.run_reports.empty()) {
    json series = json::array();
    json histo = json::array();
    for (const auto& path : a.run_reports) {
      std::ifstream f(path);
      if (!f) throw DataError("cannot open run report: " + path);
      json rep;
      try {
        f >> rep;
      } catch (const json::exception& e) {
        throw DataError(path + ": " + e.what());
      }
      const auto per_point = rep.at("accuracy").at("per_point").get<std::vector<double>>();
      AccuracySummary summary;
      summary.per_point =
          Eigen::Map<const Eigen::ArrayXd>(per_point.data(),
                                           static_cast<Eigen::Index>(per_point.size()));
      summary.mre = rep.at("accuracy").at("mre").get<double>();
      const Eigen::ArrayXd below = error_distribution(summary, thresholds);
      const Eigen::ArrayXd buckets = histogram_buckets(summary, thresholds);

      json s;
      s["report"] = path;
      s["policy"] = rep.at("schedule").at("policy");
      s["omitted"] = rep.at("schedule").at("omitted");
      series.push_back(std::move(s));

      for (std::size_t t = 0; t < thresholds.size(); ++t) {
        json h;
        h["report"] = path;
        h["threshold"] = thresholds[t];
        h["fraction_below"] = below[static_cast<Eigen::Index>(t)];
        h["bucket_fraction"] = buckets[static_cast<Eigen::Index>(t)];
        histo.push_back(std::move(h));
      }
    }
    if (as_json) {
      std::ofstream fs(dir / "omitted_series.json");
      fs << series.dump(2) << "\n";
      std::ofstream fh(dir / "histogram.json");
      fh << histo.dump(2) << "\n";
    } else {
      std::ofstream fs(dir / "omitted_series.csv");
      fs << "report,policy,call,omitted\n";
      for (const auto& s : series) {
        const auto& omitted = s.at("omitted");
        for (std::size_t i = 0; i < omitted.size(); ++i)
          fs << s.at("report").get<std::string>() << ","
             << s.at("policy").get<std::string>() << "," << i << ","
             << omitted[i].get<int>() << "\n";
      }
      std::ofstream fh(dir / "histogram.csv");
      fh << "report,threshold,fraction_below,bucket_fraction\n";
      for (const auto& h : histo)
        fh << h.at("report").get<std::string>() << ","
           << num(h.at("threshold").get<double>()) << ","
           << num(h.at("fraction_below").get<double>()) << ","
           << num(h.at("bucket_fraction").get<double>()) << "\n";
    }
    std::cout << "wrote omitted series and histogram under " << dir.string() << "\n";
  }
}

void cmd_list() {
  for (const auto& spec : list_workloads()) {
    std::cout << spec.name << " (" << spec.format.name() << "): " << spec.description
              << "; approximable:";
    for (const auto& fn : spec.approximable_fns) std::cout << " " << fn;
    if (spec.accepts_edge_list) std::cout << "; accepts --input edge list";
    std::cout << "\n";
  }
}

}  // namespace

namespace cli {

RunOutcome replay_schedule(const std::string& workload, const WorkloadInput& input,
                           std::uint64_t seed, const OmissionSchedule& schedule,
                           const WorkbenchConfig& cfg,
                           const std::vector<double>& thresholds) {
  const WorkloadResult golden =
      run_workload(workload, IdentityTransform{}, seed, cfg.cache, input);
  if (!is_result_valid(golden.output.values))
    throw DataError("golden run produced non-finite output");
  if (golden.trace.num_calls() != static_cast<std::size_t>(schedule.num_calls()))
    throw DataError("schedule length (" + std::to_string(schedule.num_calls()) +
                    ") does not match the run's dynamic calls (" +
                    std::to_string(golden.trace.num_calls()) +
                    "); was it profiled on a different input?");
  const WorkloadSpec& spec = workload_spec(workload);
  if (schedule.num_calls() > 0 &&
      schedule.omitted.maxCoeff() > spec.format.mantissa_bits)
    throw DataError("schedule omits more bits than the workload's " +
                    std::string(spec.format.name()) + " mantissa holds");

  TruncateTransform truncate{{schedule.omitted.begin(), schedule.omitted.end()}};
  const WorkloadResult replay =
      run_workload(workload, truncate, seed, cfg.cache, input);

  const AccuracySummary acc =
      mean_relative_error(replay.output.values, golden.output.values);
  const EnergyReport energy =
      energy_of_trace(replay.trace, schedule.omitted, cfg.epi, cfg.scaling);
  const Eigen::ArrayXd below = error_distribution(acc, thresholds);

  json j;
  j["workload"] = {{"name", workload},
                   {"input", input.descriptor},
                   {"seed", seed},
                   {"format", spec.format.name()},
                   {"calls", golden.trace.num_calls()}};
  j["schedule"] = {{"policy", schedule.policy},
                   {"target", schedule.target},
                   {"fraction", schedule.fraction},
                   {"matrix_fingerprint", schedule.matrix_fingerprint},
                   {"omitted", std::vector<int>(schedule.omitted.begin(),
                                                schedule.omitted.end())}};
  j["accuracy"] = {{"mre", acc.mre},
                   {"per_point", std::vector<double>(acc.per_point.begin(),
                                                     acc.per_point.end())},
                   {"thresholds", thresholds},
                   {"fraction_below", std::vector<double>(below.begin(), below.end())}};
  j["energy"] = {{"total_nj", energy.total_nj},
                 {"baseline_nj", energy.baseline_nj},
                 {"savings", energy.savings},
                 {"ambient_nj", energy.ambient_nj},
                 {"scaling", to_string(energy.scaling)},
                 {"epi", epi_json(energy.table)},
                 {"per_call_nj", std::vector<double>(energy.per_call_nj.begin(),
                                                     energy.per_call_nj.end())},
                 {"per_category_nj",
                  {{"rf", energy.per_category_nj[0]},
                   {"l1", energy.per_category_nj[1]},
                   {"l2", energy.per_category_nj[2]},
                   {"mem_rd", energy.per_category_nj[3]},
                   {"mem_wr", energy.per_category_nj[4]}}}};
  j["cache"] = cache_json(cfg.cache);

  RunOutcome out;
  out.mre = acc.mre;
  out.savings = energy.savings;
  out.total_nj = energy.total_nj;
  out.baseline_nj = energy.baseline_nj;
  out.report_json = j.dump(2);
  return out;
}

}  // namespace cli

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"dynamic precision scaling workbench"};
  app.require_subcommand(1);

  ProfileArgs pa;
  auto* profile_cmd =
      app.add_subcommand("profile", "per-call mantissa fault-injection campaign");
  profile_cmd->add_option("--workload", pa.workload, "workload name")->required();
  profile_cmd->add_option("--input", pa.input, "edge-list input file (pagerank)");
  profile_cmd->add_option("--seed", pa.seed, "input-generation seed");
  profile_cmd->add_option("--bits", pa.bits, "profile only the lowest N bits");
  profile_cmd->add_option("--jobs", pa.jobs, "parallel experiment workers");
  profile_cmd->add_option("--config", pa.config, "key=value override file");
  profile_cmd->add_option("--out-prefix", pa.out_prefix, "matrix file prefix")
      ->required();
  profile_cmd->callback([&] { cmd_profile(pa); });

  PlanArgs pl;
  auto* plan_cmd = app.add_subcommand("plan", "build an omission schedule");
  plan_cmd->add_option("--matrices", pl.matrices, "matrix file prefix")->required();
  plan_cmd->add_option("--policy", pl.policy, "dps | dps+ | sps | sps+")->required();
  plan_cmd->add_option("--target", pl.target, "accuracy-loss bound");
  plan_cmd->add_option("--fraction", pl.fraction, "static omission fraction (sps)");
  plan_cmd->add_option("--out", pl.out, "schedule output path")->required();
  plan_cmd->callback([&] { cmd_plan(pl); });

  RunArgs ra;
  auto* run_cmd = app.add_subcommand("run", "replay a schedule and report");
  run_cmd->add_option("--workload", ra.workload, "workload name")->required();
  run_cmd->add_option("--input", ra.input, "edge-list input file (pagerank)");
  run_cmd->add_option("--seed", ra.seed, "input-generation seed");
  run_cmd->add_option("--schedule", ra.schedule, "schedule json")->required();
  run_cmd->add_option("--config", ra.config, "key=value override file");
  run_cmd->add_option("--out", ra.out, "run report json path");
  run_cmd->callback([&] { cmd_run(ra); });

  SweepArgs sa;
  auto* sweep_cmd =
      app.add_subcommand("sweep", "profile once, plan and replay per (policy, target)");
  sweep_cmd->add_option("--workload", sa.workload, "workload name")->required();
  sweep_cmd->add_option("--input", sa.input, "edge-list input file (pagerank)");
  sweep_cmd->add_option("--seed", sa.seed, "input-generation seed");
  sweep_cmd->add_option("--bits", sa.bits, "profile only the lowest N bits");
  sweep_cmd->add_option("--jobs", sa.jobs, "parallel experiment workers");
  sweep_cmd->add_option("--targets", sa.targets, "comma list of accuracy targets");
  sweep_cmd->add_option("--policies", sa.policies, "comma list of dps,dps+,sps+");
  sweep_cmd->add_option("--config", sa.config, "key=value override file");
  sweep_cmd->add_option("--out", sa.out, "consolidated csv path")->required();
  sweep_cmd->callback([&] { cmd_sweep(sa); });

  ReportArgs re;
  auto* report_cmd =
      app.add_subcommand("report", "plot-ready artifacts from matrices/run reports");
  report_cmd->add_option("--matrices", re.matrices, "matrix file prefix");
  report_cmd->add_option("--run-reports", re.run_reports, "run report json files");
  report_cmd->add_option("--format", re.format, "csv | json");
  report_cmd->add_option("--thresholds", re.thresholds, "comma list for histograms");
  report_cmd->add_option("--out-dir", re.out_dir, "output directory")->required();
  report_cmd->callback([&] { cmd_report(re); });

  auto* list_cmd = app.add_subcommand("list", "list bundled workloads");
  list_cmd->callback([] { cmd_list(); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::logic_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

int cli_main(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("dps");
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace dps
