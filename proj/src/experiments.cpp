#include "rotorcut/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "rotorcut/checkpoint.hpp"
#include "rotorcut/rng.hpp"

namespace rotorcut {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Runs task(k) for k in [0, count) on a small pool; the first exception wins.
template <typename Task>
void parallel_for(std::size_t count, int threads, Task task) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t k = 0; k < count; ++k) task(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < count; k = next++) {
        try {
          task(k);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << std::setprecision(17);
  return out;
}

nlohmann::json stats_json(const SeedStats& s) {
  nlohmann::json per_seed = nlohmann::json::array();
  for (const SeedRecord& r : s.per_seed)
    per_seed.push_back({{"seed", r.seed},
                        {"energy", r.energy},
                        {"cut_value", r.cut_value},
                        {"wall_time", r.wall_time}});
  return {{"mean", s.mean},         {"std", s.std},         {"min", s.min},
          {"max", s.max},           {"cut_mean", s.cut_mean}, {"cut_std", s.cut_std},
          {"cut_min", s.cut_min},   {"cut_max", s.cut_max},   {"per_seed", per_seed}};
}

nlohmann::json config_json(const ExperimentSpec& spec) {
  const VmcConfig& v = spec.vmc;
  const BmzConfig& b = spec.bmz;
  return {{"solver", to_string(spec.solver)},
          {"seeds", spec.seeds},
          {"init", spec.init == InitKind::pretrained ? "pretrained" : "random"},
          {"r", spec.pretrain_radius},
          {"sigma", spec.weight_sigma},
          {"vmc",
           {{"n_samp", v.n_samp},
            {"n_warm", v.n_warm},
            {"n_iter", v.n_iter},
            {"lambda_reg", v.lambda_reg},
            {"learning_rate", v.learning_rate},
            {"alpha", v.alpha},
            {"step", v.proposal_step},
            {"auto_step", v.auto_step},
            {"minres_tol", v.minres_tol},
            {"minres_max_iter", v.minres_max_iter}}},
          {"bmz",
           {{"max_iters", b.max_iters},
            {"grad_tol", b.grad_tol},
            {"tr_radius_init", b.tr_radius_init},
            {"tr_radius_max", b.tr_radius_max},
            {"accept_ratio_lo", b.accept_ratio_lo},
            {"accept_ratio_hi", b.accept_ratio_hi}}}};
}

}  // namespace

std::string to_string(Solver s) {
  switch (s) {
    case Solver::bmz: return "bmz";
    case Solver::nqs: return "nqs";
    case Solver::both: return "both";
  }
  return "?";
}

std::string to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::n_iter: return "n_iter";
    case SweepParameter::samp_warm: return "samp_warm";
    case SweepParameter::lambda_reg: return "lambda_reg";
  }
  return "?";
}

void ExperimentSpec::validate() const {
  if (seeds.empty()) throw std::invalid_argument("experiment needs at least one seed");
  if (!(pretrain_radius >= 0.0)) throw std::invalid_argument("pretrain radius r must be >= 0");
  if (!(weight_sigma >= 0.0)) throw std::invalid_argument("weight sigma must be >= 0");
  if (solver == Solver::bmz && init == InitKind::pretrained)
    throw std::invalid_argument("pretrained init needs an NQS run (solver nqs or both)");
  if (runs_nqs()) vmc.validate();
  if (runs_bmz()) bmz.validate();
}

namespace {

struct Moments {
  double mean, std, min, max;
};

Moments moments(const std::vector<SeedRecord>& rows, double SeedRecord::*field) {
  const double count = static_cast<double>(rows.size());
  Moments m{0.0, 0.0, rows.front().*field, rows.front().*field};
  double sum = 0.0;
  for (const SeedRecord& r : rows) {
    sum += r.*field;
    m.min = std::min(m.min, r.*field);
    m.max = std::max(m.max, r.*field);
  }
  m.mean = sum / count;
  double squares = 0.0;
  for (const SeedRecord& r : rows) squares += (r.*field - m.mean) * (r.*field - m.mean);
  m.std = std::sqrt(squares / count);
  return m;
}

}  // namespace

SeedStats compute_stats(std::vector<SeedRecord> per_seed) {
  if (per_seed.empty()) throw std::invalid_argument("compute_stats: no seeds");
  SeedStats s;
  const Moments e = moments(per_seed, &SeedRecord::energy);
  const Moments c = moments(per_seed, &SeedRecord::cut_value);
  s.mean = e.mean;
  s.std = e.std;
  s.min = e.min;
  s.max = e.max;
  s.cut_mean = c.mean;
  s.cut_std = c.std;
  s.cut_min = c.min;
  s.cut_max = c.max;
  s.per_seed = std::move(per_seed);
  return s;
}

RotorConfig bmz_start(int n, std::uint64_t seed) {
  Rng rng(seed, /*stream=*/3);
  return RotorConfig::random(n, rng);
}

ExperimentResult run_experiment(const Graph& g, const ExperimentSpec& spec) {
  spec.validate();
  ExperimentResult result;
  result.outcomes.resize(spec.seeds.size());

  parallel_for(spec.seeds.size(), spec.threads, [&](std::size_t k) {
    SeedOutcome& out = result.outcomes[k];
    out.seed = spec.seeds[k];
    if (spec.runs_bmz()) {
      const auto start = Clock::now();
      out.bmz = bmz_minimize(g, bmz_start(g.num_vertices(), out.seed), spec.bmz);
      out.bmz_cut = procedure_cut(g, out.bmz->theta);
      out.bmz_wall_time = seconds_since(start);
    }
    if (spec.runs_nqs()) {
      VmcConfig cfg = spec.vmc;
      cfg.seed = out.seed;
      const RbmParams init =
          spec.init == InitKind::pretrained
              ? init_pretrained(out.bmz->theta, cfg.alpha, spec.pretrain_radius, spec.weight_sigma,
                                out.seed)
              : init_random(g.num_vertices(), cfg.alpha, spec.weight_sigma, out.seed);
      out.nqs = run_vmc(g, cfg, init);
    }
  });

  if (spec.solver != Solver::nqs) {
    std::vector<SeedRecord> rows;
    for (const SeedOutcome& o : result.outcomes)
      rows.push_back({o.seed, o.bmz->energy, o.bmz_cut->value, o.bmz_wall_time});
    result.bmz = compute_stats(std::move(rows));
  }
  if (spec.runs_nqs()) {
    std::vector<SeedRecord> rows;
    for (const SeedOutcome& o : result.outcomes)
      rows.push_back({o.seed, o.nqs->best_energy, o.nqs->best_cut.value, o.nqs->wall_seconds});
    result.nqs = compute_stats(std::move(rows));
  }
  return result;
}

void write_experiment(const ExperimentSpec& spec, const Graph& g, const ExperimentResult& result) {
  namespace fs = std::filesystem;
  if (spec.out_dir.empty()) return;
  const fs::path dir(spec.out_dir);
  fs::create_directories(dir);

  std::vector<std::pair<std::string, const SeedStats*>> tables;
  if (result.bmz) tables.emplace_back("bmz", &*result.bmz);
  if (result.nqs) tables.emplace_back("nqs", &*result.nqs);

  {
    auto out = open_output(dir / "per_seed.csv");
    out << "solver,seed,energy,cut_value\n";
    for (const auto& [name, stats] : tables)
      for (const SeedRecord& r : stats->per_seed)
        out << name << ',' << r.seed << ',' << r.energy << ',' << r.cut_value << '\n';
  }
  {
    auto out = open_output(dir / "stats.csv");
    out << "solver,mean,std,min,max,cut_mean,cut_std,cut_min,cut_max,seeds\n";
    for (const auto& [name, stats] : tables)
      out << name << ',' << stats->mean << ',' << stats->std << ',' << stats->min << ','
          << stats->max << ',' << stats->cut_mean << ',' << stats->cut_std << ','
          << stats->cut_min << ',' << stats->cut_max << ',' << stats->per_seed.size() << '\n';
  }
  {
    auto out = open_output(dir / "timing.csv");
    out << "solver,seed,wall_time\n";
    for (const auto& [name, stats] : tables)
      for (const SeedRecord& r : stats->per_seed)
        out << name << ',' << r.seed << ',' << r.wall_time << '\n';
  }
  if (result.bmz && result.nqs) {
    auto out = open_output(dir / "comparison.csv");
    out << "seed,bmz_energy,nqs_energy,bmz_cut,nqs_cut\n";
    for (const SeedOutcome& o : result.outcomes)
      out << o.seed << ',' << o.bmz->energy << ',' << o.nqs->best_energy << ','
          << o.bmz_cut->value << ',' << o.nqs->best_cut.value << '\n';
  }
  for (const SeedOutcome& o : result.outcomes) {
    if (!o.nqs) continue;
    auto out = open_output(dir / ("nqs_trace_seed" + std::to_string(o.seed) + ".csv"));
    write_trace_csv(out, *o.nqs);
    nlohmann::json cfg = config_json(spec);
    cfg["seed"] = o.seed;
    write_checkpoint((dir / ("nqs_params_seed" + std::to_string(o.seed) + ".bin")).string(),
                     o.nqs->final_params, cfg);
  }

  nlohmann::json summary;
  summary["config"] = config_json(spec);
  summary["graph"] = {{"n", g.num_vertices()},
                      {"edges", g.num_edges()},
                      {"total_weight", g.total_weight()}};
  double wall = 0.0;
  for (const auto& [name, stats] : tables) {
    nlohmann::json entry = stats_json(*stats);
    const auto best = std::min_element(
        stats->per_seed.begin(), stats->per_seed.end(),
        [](const SeedRecord& a, const SeedRecord& b) { return a.energy < b.energy; });
    double best_cut = 0.0;
    for (const SeedRecord& r : stats->per_seed) best_cut = std::max(best_cut, r.cut_value);
    entry["best_energy"] = best->energy;
    entry["best_cut"] = best_cut;
    summary[name] = entry;
    for (const SeedRecord& r : stats->per_seed) wall += r.wall_time;
  }
  if (result.bmz && result.nqs)
    summary["comparison"] = {{"nqs_mean_minus_bmz_mean", result.nqs->mean - result.bmz->mean},
                             {"nqs_min_minus_bmz_min", result.nqs->min - result.bmz->min}};
  summary["wall_time"] = wall;
  auto out = open_output(dir / "summary.json");
  out << summary.dump(2) << '\n';
}

std::vector<SweepRow> run_sweep(const Graph& g, const ExperimentSpec& spec, SweepParameter param,
                                const std::vector<SweepPoint>& grid) {
  if (grid.empty()) throw std::invalid_argument("sweep grid is empty");
  std::vector<SweepRow> rows;
  for (const SweepPoint& point : grid) {
    ExperimentSpec local = spec;
    local.solver = Solver::nqs;
    local.out_dir.clear();
    switch (param) {
      case SweepParameter::n_iter:
        local.vmc.n_iter = point.n_iter;
        break;
      case SweepParameter::samp_warm:
        local.vmc.n_samp = point.n_samp;
        local.vmc.n_warm = point.n_warm;
        break;
      case SweepParameter::lambda_reg:
        local.vmc.lambda_reg = point.lambda_reg;
        break;
    }
    ExperimentResult result = run_experiment(g, local);
    rows.push_back({point, std::move(*result.nqs)});
  }
  return rows;
}

void write_sweep_csv(const std::string& path, SweepParameter param,
                     const std::vector<SweepRow>& rows) {
  auto out = open_output(path);
  out << (param == SweepParameter::samp_warm ? "n_samp,n_warm" : to_string(param))
      << ",mean,std,min,max,cut_mean,cut_std,cut_min,cut_max\n";
  for (const SweepRow& r : rows) {
    switch (param) {
      case SweepParameter::n_iter: out << r.point.n_iter; break;
      case SweepParameter::samp_warm: out << r.point.n_samp << ',' << r.point.n_warm; break;
      case SweepParameter::lambda_reg: out << r.point.lambda_reg; break;
    }
    out << ',' << r.stats.mean << ',' << r.stats.std << ',' << r.stats.min << ',' << r.stats.max
        << ',' << r.stats.cut_mean << ',' << r.stats.cut_std << ',' << r.stats.cut_min << ','
        << r.stats.cut_max << '\n';
  }
}

}  // namespace rotorcut
