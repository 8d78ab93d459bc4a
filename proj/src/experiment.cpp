#include "crowdwise/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

namespace crowdwise {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

namespace {

std::vector<double> to_std(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

void write_json(const fs::path& path, const ordered_json& j) {
  write_text(path, j.dump(2) + "\n");
}

ordered_json nash_report_json(const NashReport& report) {
  ordered_json j;
  j["verdict"] = to_string(report.verdict);
  if (report.alpha_hat) j["alpha_hat"] = *report.alpha_hat;
  ordered_json cert = ordered_json::array();
  for (const CertificateCheck& c : report.certificate)
    cert.push_back({{"name", c.name}, {"pass", c.pass}});
  j["certificate"] = cert;
  if (report.max_deviation_gain)
    j["max_deviation_gain"] = *report.max_deviation_gain;
  return j;
}

ordered_json summary_json(const RunSummary& s) {
  ordered_json j;
  j["converged"] = s.converged;
  j["steps"] = s.steps;
  if (s.entry_time)
    j["entry_time"] = *s.entry_time;
  else
    j["entry_time"] = nullptr;
  if (s.alpha_hat)
    j["alpha_hat"] = *s.alpha_hat;
  else
    j["alpha_hat"] = nullptr;
  j["final_z"] = to_std(s.final_z);
  j["apriori_bound_ok"] = s.apriori_bound_ok;
  return j;
}

std::string trajectory_csv(const std::vector<TrajectoryRecord>& rows, int n) {
  std::string csv = "t,active_agent";
  for (int i = 1; i <= n; ++i) csv += ",z_" + std::to_string(i);
  csv += ",V,M\n";
  for (const TrajectoryRecord& rec : rows) {
    csv += std::to_string(rec.t);
    csv += ',';
    if (rec.active_agent >= 0) csv += std::to_string(rec.active_agent + 1);
    for (int i = 0; i < n; ++i) {
      csv += ',';
      csv += format_double(rec.z(i));
    }
    csv += ',';
    if (rec.v) csv += format_double(*rec.v);
    csv += ',';
    if (std::isfinite(rec.m)) csv += format_double(rec.m);
    csv += '\n';
  }
  return csv;
}

// Residual of the point best-response fixed point at z (interior only).
double fixed_point_residual(const InfluenceNetwork& net,
                            const NoiseModel& noise,
                            const SelfConfidenceProfile& z) {
  double r = 0.0;
  for (int i = 0; i < net.n(); ++i) {
    BestResponseSet br = best_response(net, noise, z, i);
    if (br.kind != BestResponseSet::Kind::Point)
      return std::numeric_limits<double>::infinity();
    r = std::max(r, std::abs(z.z(i) - br.value));
  }
  return r;
}

int sweep_workers(std::size_t jobs) {
  unsigned hw = std::thread::hardware_concurrency();
  long cap = hw ? hw : 1;
  if (const char* env = std::getenv("CROWDWISE_THREADS")) {
    char* end = nullptr;
    long parsed = std::strtol(env, &end, 10);
    if (end != env && parsed >= 1) cap = parsed;
  }
  return static_cast<int>(std::min<std::size_t>(cap, jobs));
}

struct Instance {
  InfluenceNetwork net;
  NoiseModel noise;
};

Instance make_instance(const ExperimentConfig& cfg) {
  return Instance{validate_network(cfg.P), NoiseModel(cfg.theta, cfg.sigma2)};
}

RunConfig make_run_config(const ExperimentConfig& cfg,
                          SelfConfidenceProfile z0, std::uint64_t seed) {
  return RunConfig{seed, std::move(z0), cfg.max_steps, cfg.tol_fp,
                   cfg.record_every};
}

}  // namespace

int cmd_analyze(const ExperimentConfig& cfg) {
  Instance inst = make_instance(cfg);
  ParetoSegment seg = pareto_segment(inst.net, inst.noise);

  ordered_json j;
  j["n"] = inst.net.n();
  j["pi"] = to_std(inst.net.centrality());
  j["mu_star"] = to_std(seg.mu_star);
  j["v_min"] = seg.v_min;
  j["alpha_star"] = seg.alpha_star;
  j["direction"] = to_std(seg.direction);
  if (cfg.z0.kind != Z0Spec::Kind::None) {
    SelfConfidenceProfile z0 = resolve_z0(cfg, inst.net, inst.noise);
    j["z0"] = to_std(z0.z);
    j["nash_report"] =
        nash_report_json(classify_profile(inst.net, inst.noise, z0));
  }
  write_json(fs::path(cfg.output_dir) / "analysis.json", j);
  return kExitOk;
}

int cmd_simulate(const ExperimentConfig& cfg) {
  Instance inst = make_instance(cfg);
  SelfConfidenceProfile z0 = resolve_z0(cfg, inst.net, inst.noise);
  RunResult result =
      run(inst.net, inst.noise, make_run_config(cfg, std::move(z0), cfg.seed));

  write_text(fs::path(cfg.output_dir) / "trajectory.csv",
             trajectory_csv(result.trajectory, inst.net.n()));
  write_json(fs::path(cfg.output_dir) / "summary.json",
             summary_json(result.summary));
  return result.summary.converged ? kExitOk : kExitNotConverged;
}

int cmd_sweep(const ExperimentConfig& cfg) {
  if (cfg.seeds.empty())
    throw ConfigError("seeds", "sweep requires a nonempty seeds list");
  Instance inst = make_instance(cfg);
  SelfConfidenceProfile z0 = resolve_z0(cfg, inst.net, inst.noise);

  std::vector<RunSummary> summaries(cfg.seeds.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (std::size_t i; (i = cursor.fetch_add(1)) < cfg.seeds.size();) {
      RunResult r =
          run(inst.net, inst.noise, make_run_config(cfg, z0, cfg.seeds[i]));
      summaries[i] = std::move(r.summary);
    }
  };
  std::vector<std::thread> pool;
  int workers = sweep_workers(cfg.seeds.size());
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  // Single collector writes everything in seed order.
  std::size_t converged = 0;
  double a_min = std::numeric_limits<double>::infinity();
  double a_max = -std::numeric_limits<double>::infinity();
  double a_sum = 0.0;
  double max_residual = 0.0;
  ordered_json per_seed = ordered_json::array();
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
    const RunSummary& s = summaries[i];
    write_json(fs::path(cfg.output_dir) /
                   ("summary_" + std::to_string(cfg.seeds[i]) + ".json"),
               summary_json(s));
    ordered_json row = summary_json(s);
    row["seed"] = cfg.seeds[i];
    per_seed.push_back(row);
    if (s.converged) {
      ++converged;
      a_min = std::min(a_min, *s.alpha_hat);
      a_max = std::max(a_max, *s.alpha_hat);
      a_sum += *s.alpha_hat;
      max_residual = std::max(
          max_residual, fixed_point_residual(inst.net, inst.noise,
                                             SelfConfidenceProfile(s.final_z)));
    }
  }

  ordered_json agg;
  agg["runs"] = cfg.seeds.size();
  agg["convergence_rate"] =
      static_cast<double>(converged) / static_cast<double>(cfg.seeds.size());
  if (converged > 0) {
    agg["alpha_hat"] = {{"min", a_min},
                        {"mean", a_sum / static_cast<double>(converged)},
                        {"max", a_max}};
    agg["max_fixed_point_residual"] = max_residual;
  } else {
    agg["alpha_hat"] = nullptr;
    agg["max_fixed_point_residual"] = nullptr;
  }
  agg["per_seed"] = per_seed;
  write_json(fs::path(cfg.output_dir) / "aggregate.json", agg);
  return converged == cfg.seeds.size() ? kExitOk : kExitNotConverged;
}

int cmd_opinions(const ExperimentConfig& cfg) {
  Instance inst = make_instance(cfg);
  SelfConfidenceProfile z0 = resolve_z0(cfg, inst.net, inst.noise);
  const int n = inst.net.n();

  SplitMix64 master(cfg.seed);
  std::uint64_t first_seed = cfg.replicates > 0 ? master.next_u64() : cfg.seed;
  std::vector<OpinionState> trajectory = simulate_opinions(
      inst.net, z0, inst.noise, first_seed, cfg.t_max, cfg.noise);

  std::string csv = "t";
  for (int i = 1; i <= n; ++i) csv += ",x_" + std::to_string(i);
  csv += '\n';
  for (const OpinionState& state : trajectory) {
    csv += std::to_string(state.t);
    for (int i = 0; i < n; ++i) {
      csv += ',';
      csv += format_double(state.x(i));
    }
    csv += '\n';
  }
  write_text(fs::path(cfg.output_dir) / "opinions.csv", csv);

  if (cfg.replicates > 0) {
    // Welford accumulation of x(t_max) across replicate streams.
    Vector mean = Vector::Zero(n), m2 = Vector::Zero(n);
    long count = 0;
    auto accumulate = [&](const Vector& x) {
      ++count;
      for (int i = 0; i < n; ++i) {
        double delta = x(i) - mean(i);
        mean(i) += delta / static_cast<double>(count);
        m2(i) += delta * (x(i) - mean(i));
      }
    };
    accumulate(trajectory.back().x);
    for (long r = 1; r < cfg.replicates; ++r) {
      std::vector<OpinionState> t = simulate_opinions(
          inst.net, z0, inst.noise, master.next_u64(), cfg.t_max, cfg.noise);
      accumulate(t.back().x);
    }
    Vector variance =
        count > 1 ? Vector(m2 / static_cast<double>(count - 1)) : m2;

    ordered_json j;
    j["replicates"] = cfg.replicates;
    j["t_max"] = cfg.t_max;
    j["empirical_mean"] = to_std(mean);
    j["empirical_variance"] = to_std(variance);
    j["predicted_variance"] =
        to_std(estimation_variances(inst.net, z0, inst.noise));
    write_json(fs::path(cfg.output_dir) / "opinions_summary.json", j);
  }
  return kExitOk;
}

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Self-confidence adaptation on distributed averaging networks"};
  app.require_subcommand(1);

  struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> output;
    std::optional<long> max_steps;
  } opt;

  std::vector<CLI::App*> subs;
  for (const char* name : {"analyze", "simulate", "sweep", "opinions"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", opt.config, "experiment config (JSON)")
        ->required();
    sub->add_option("--seed", opt.seed, "override config seed");
    sub->add_option("--output", opt.output, "override output directory");
    sub->add_option("--max-steps", opt.max_steps, "override max steps");
    subs.push_back(sub);
  }

  try {
    // CLI11 wants argv-style reversed remaining arguments.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  }

  try {
    ExperimentConfig cfg = load_config(opt.config);
    if (opt.seed) cfg.seed = *opt.seed;
    if (opt.output) cfg.output_dir = *opt.output;
    if (opt.max_steps) {
      if (*opt.max_steps < 1)
        throw ConfigError("max_steps", "max_steps must be >= 1");
      cfg.max_steps = *opt.max_steps;
    }
    if (subs[0]->parsed()) return cmd_analyze(cfg);
    if (subs[1]->parsed()) return cmd_simulate(cfg);
    if (subs[2]->parsed()) return cmd_sweep(cfg);
    return cmd_opinions(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error";
    if (!e.field.empty()) std::cerr << " [" << e.field << "]";
    std::cerr << ": " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace crowdwise
