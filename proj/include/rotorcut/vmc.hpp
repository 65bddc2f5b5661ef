#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "rotorcut/bmz.hpp"
#include "rotorcut/graph.hpp"
#include "rotorcut/rbm.hpp"
#include "rotorcut/rng.hpp"
#include "rotorcut/rotor.hpp"

namespace rotorcut {

struct VmcConfig {
  int n_samp = 40;
  int n_warm = 0;  // leading samples of each batch left out of the estimates
  int n_iter = 1000;
  double lambda_reg = 1e-6;
  double learning_rate = 0.01;
  double alpha = 1.0;          // hidden units per visible unit
  double proposal_step = 0.3;  // radians, half-width of the uniform proposal
  bool auto_step = false;      // adapt the step towards 50% acceptance during warm samples
  double minres_tol = 1e-10;
  int minres_max_iter = 0;  // 0 means the parameter count P
  std::uint64_t seed = 0;

  void validate() const;
  int recorded_samples() const { return n_samp - n_warm; }
};

/// A single Metropolis walker. The cached log-amplitude always matches the
/// current angles under the parameters the chain was last stepped with.
struct ChainState {
  RotorConfig theta;
  double log_psi_cached = 0.0;
  double step = 0.3;
  Rng rng{0};
};

/// Walker at uniformly random angles drawn from (seed, stream 2).
ChainState make_chain(const RbmParams& p, double step, std::uint64_t seed);

/// Re-evaluates the cached log-amplitude, e.g. after a parameter update.
void refresh_chain(const RbmParams& p, ChainState& chain);

/// One random-walk proposal moving every angle by Uniform(-step, step),
/// accepted with probability min(1, exp(2 (ln psi' - ln psi))). Returns whether
/// the proposal was accepted.
bool mh_step(const RbmParams& p, ChainState& chain, double step);

/// Monte Carlo batch for one stochastic-reconfiguration step.
struct SrBatch {
  Eigen::MatrixXd samples;   // N x n angles
  Eigen::MatrixXd o_matrix;  // N x P log-derivatives, row k for sample k
  Eigen::VectorXd e_loc;     // N local energies (the rotor cost)
  double accept_rate = 0.0;  // over all n_samp proposals

  int size() const { return static_cast<int>(e_loc.size()); }
};

/// Advances the chain n_samp steps and records the last n_samp - n_warm
/// states. The chain is updated in place and carries over to the next batch.
SrBatch sample_batch(const Graph& g, const RbmParams& p, ChainState& chain, const VmcConfig& cfg);

struct Forces {
  double e_mean = 0.0;
  Eigen::VectorXd gradient;  // g_k = 2 (<E O_k> - <E><O_k>)
  Eigen::VectorXd o_mean;
};

Forces estimate_forces(const SrBatch& batch);

/// (S + lambda I) as a matrix-free operator, S = Obar^T Obar / N with Obar the
/// column-centred log-derivative matrix. The P x P matrix is never formed.
class MetricOperator {
 public:
  MetricOperator(const SrBatch& batch, double lambda);

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  int dimension() const { return static_cast<int>(centered_.cols()); }

 private:
  Eigen::MatrixXd centered_;
  double lambda_;
};

Eigen::VectorXd apply_metric(const SrBatch& batch, const Eigen::VectorXd& x, double lambda);

struct SrDiagnostics {
  double e_mean = 0.0;
  double accept_rate = 0.0;
  double residual = 0.0;
  int minres_iters = 0;
  double batch_min_energy = 0.0;
  RotorConfig batch_min_theta;
};

struct SrStepResult {
  RbmParams params;
  SrDiagnostics diagnostics;
};

/// sample_batch, estimate_forces, solve (S + lambda I) delta = g with MINRES
/// and return p - learning_rate * delta. The chain is advanced in place and its
/// cache refreshed for the new parameters.
SrStepResult sr_iteration(const Graph& g, const RbmParams& p, ChainState& chain,
                          const VmcConfig& cfg);

struct IterationRecord {
  int iteration = 0;
  double e_mean = 0.0;
  double accept_rate = 0.0;
  double residual = 0.0;
  double best_energy = 0.0;  // lowest sampled cost up to and including this iteration
};

struct RunTrace {
  std::vector<IterationRecord> records;
  RbmParams final_params;
  RotorConfig best_theta;
  double best_energy = 0.0;
  ProcedureCutResult best_cut;
  double wall_seconds = 0.0;
};

using IterationCallback = std::function<void(const IterationRecord&)>;

/// n_iter SR iterations from init with a chain seeded by cfg.seed. The reported
/// solution is the lowest-cost sample seen over the whole run.
RunTrace run_vmc(const Graph& g, const VmcConfig& cfg, const RbmParams& init,
                 const IterationCallback& on_iteration = {});

/// iteration,e_mean,accept_rate,residual,best_energy
void write_trace_csv(std::ostream& out, const RunTrace& trace);

}  // namespace rotorcut
