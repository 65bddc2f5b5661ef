#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rotorcut/bmz.hpp"
#include "rotorcut/graph.hpp"
#include "rotorcut/vmc.hpp"

namespace rotorcut {

enum class Solver { bmz, nqs, both };
enum class InitKind { random, pretrained };

struct ExperimentSpec {
  Solver solver = Solver::nqs;
  VmcConfig vmc;
  BmzConfig bmz;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  InitKind init = InitKind::random;
  double pretrain_radius = kDefaultPretrainRadius;
  double weight_sigma = kDefaultWeightSigma;
  std::string out_dir;  // empty: nothing is written
  int threads = 0;      // 0: std::thread::hardware_concurrency()

  void validate() const;
  bool runs_bmz() const { return solver != Solver::nqs || init == InitKind::pretrained; }
  bool runs_nqs() const { return solver != Solver::bmz; }
};

struct SeedRecord {
  std::uint64_t seed = 0;
  double energy = 0.0;
  double cut_value = 0.0;
  double wall_time = 0.0;
};

/// Aggregates over seeds; std is the population standard deviation. The plain
/// fields describe the energies, the cut_ fields the Procedure-Cut values.
struct SeedStats {
  double mean = 0.0;
  double std = 0.0;
  double min = 0.0;
  double max = 0.0;
  double cut_mean = 0.0;
  double cut_std = 0.0;
  double cut_min = 0.0;
  double cut_max = 0.0;
  std::vector<SeedRecord> per_seed;
};

SeedStats compute_stats(std::vector<SeedRecord> per_seed);

/// Everything produced for one seed.
struct SeedOutcome {
  std::uint64_t seed = 0;
  std::optional<BmzResult> bmz;
  std::optional<ProcedureCutResult> bmz_cut;
  double bmz_wall_time = 0.0;
  std::optional<RunTrace> nqs;
};

struct ExperimentResult {
  std::vector<SeedOutcome> outcomes;  // in spec.seeds order
  std::optional<SeedStats> bmz;
  std::optional<SeedStats> nqs;
};

/// Random start for the BMZ solver of a given seed.
RotorConfig bmz_start(int n, std::uint64_t seed);

/// Runs every seed on a worker pool; per seed the BMZ solve (when needed)
/// completes before any NQS run that is initialised from it.
ExperimentResult run_experiment(const Graph& g, const ExperimentSpec& spec);

/// Writes per-seed traces, per_seed.csv, stats.csv, timing.csv, comparison.csv
/// (both solvers) and summary.json into spec.out_dir.
void write_experiment(const ExperimentSpec& spec, const Graph& g, const ExperimentResult& result);

enum class SweepParameter { n_iter, samp_warm, lambda_reg };

struct SweepPoint {
  int n_iter = 0;
  int n_samp = 0;
  int n_warm = 0;
  double lambda_reg = 0.0;
};

struct SweepRow {
  SweepPoint point;
  SeedStats stats;
};

/// One NQS SeedStats row per grid point. Only the fields selected by param
/// are read from each point; everything else comes from spec.vmc.
std::vector<SweepRow> run_sweep(const Graph& g, const ExperimentSpec& spec, SweepParameter param,
                                const std::vector<SweepPoint>& grid);

void write_sweep_csv(const std::string& path, SweepParameter param,
                     const std::vector<SweepRow>& rows);

std::string to_string(Solver s);
std::string to_string(SweepParameter p);

}  // namespace rotorcut
