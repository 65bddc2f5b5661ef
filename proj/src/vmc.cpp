#include "rotorcut/vmc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "rotorcut/minres.hpp"

namespace rotorcut {

void VmcConfig::validate() const {
  if (n_samp < 1) throw std::invalid_argument("VmcConfig: n_samp must be positive");
  if (n_warm < 0 || n_warm >= n_samp)
    throw std::invalid_argument("VmcConfig: need 0 <= n_warm < n_samp");
  if (n_iter < 1) throw std::invalid_argument("VmcConfig: n_iter must be positive");
  if (!(lambda_reg >= 0.0)) throw std::invalid_argument("VmcConfig: lambda_reg must be >= 0");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("VmcConfig: learning_rate must be > 0");
  if (!(alpha > 0.0)) throw std::invalid_argument("VmcConfig: alpha must be > 0");
  if (!(proposal_step > 0.0)) throw std::invalid_argument("VmcConfig: proposal_step must be > 0");
  if (!(minres_tol > 0.0)) throw std::invalid_argument("VmcConfig: minres_tol must be > 0");
  if (minres_max_iter < 0) throw std::invalid_argument("VmcConfig: minres_max_iter must be >= 0");
}

ChainState make_chain(const RbmParams& p, double step, std::uint64_t seed) {
  ChainState chain;
  chain.rng = Rng(seed, /*stream=*/2);
  chain.theta = RotorConfig::random(p.num_visible(), chain.rng);
  chain.log_psi_cached = log_psi(p, chain.theta);
  chain.step = step;
  return chain;
}

void refresh_chain(const RbmParams& p, ChainState& chain) {
  chain.log_psi_cached = log_psi(p, chain.theta);
}

bool mh_step(const RbmParams& p, ChainState& chain, double step) {
  const int n = chain.theta.size();
  Eigen::VectorXd proposal = chain.theta.angles();
  for (int j = 0; j < n; ++j) proposal[j] += chain.rng.uniform(-step, step);
  RotorConfig candidate(std::move(proposal));
  const double candidate_log_psi = log_psi(p, candidate);
  const double log_ratio = 2.0 * (candidate_log_psi - chain.log_psi_cached);
  const double u = chain.rng.uniform_open();
  if (log_ratio >= 0.0 || std::log(u) < log_ratio) {
    chain.theta = std::move(candidate);
    chain.log_psi_cached = candidate_log_psi;
    return true;
  }
  return false;
}

SrBatch sample_batch(const Graph& g, const RbmParams& p, ChainState& chain, const VmcConfig& cfg) {
  cfg.validate();
  const int n = p.num_visible();
  const int rows = cfg.recorded_samples();
  SrBatch batch;
  batch.samples.resize(rows, n);
  batch.o_matrix.resize(rows, p.num_params());
  batch.e_loc.resize(rows);

  int accepted = 0;
  for (int t = 0; t < cfg.n_samp; ++t) {
    const bool warm = t < cfg.n_warm;
    const bool ok = mh_step(p, chain, chain.step);
    accepted += ok ? 1 : 0;
    if (warm && cfg.auto_step) {
      chain.step *= std::exp(0.1 * ((ok ? 1.0 : 0.0) - 0.5));
      chain.step = std::clamp(chain.step, 1e-4, 3.14159);
    }
    if (warm) continue;
    const int k = t - cfg.n_warm;
    batch.samples.row(k) = chain.theta.angles().transpose();
    batch.o_matrix.row(k) = log_derivatives(p, chain.theta).transpose();
    batch.e_loc[k] = cost(g, chain.theta);
  }
  batch.accept_rate = static_cast<double>(accepted) / cfg.n_samp;
  return batch;
}

Forces estimate_forces(const SrBatch& batch) {
  const int rows = batch.size();
  if (rows == 0) throw std::invalid_argument("estimate_forces: empty batch");
  Forces f;
  f.e_mean = batch.e_loc.mean();
  f.o_mean = batch.o_matrix.colwise().mean().transpose();
  const Eigen::VectorXd eo_mean = batch.o_matrix.transpose() * batch.e_loc / rows;
  f.gradient = 2.0 * (eo_mean - f.e_mean * f.o_mean);
  return f;
}

MetricOperator::MetricOperator(const SrBatch& batch, double lambda)
    : centered_(batch.o_matrix.rowwise() - batch.o_matrix.colwise().mean()), lambda_(lambda) {
  if (batch.size() == 0) throw std::invalid_argument("MetricOperator: empty batch");
}

Eigen::VectorXd MetricOperator::apply(const Eigen::VectorXd& x) const {
  if (x.size() != centered_.cols())
    throw std::invalid_argument("apply_metric: vector length does not match parameter count");
  const Eigen::VectorXd projected = centered_ * x;
  return centered_.transpose() * projected / static_cast<double>(centered_.rows()) + lambda_ * x;
}

Eigen::VectorXd apply_metric(const SrBatch& batch, const Eigen::VectorXd& x, double lambda) {
  return MetricOperator(batch, lambda).apply(x);
}

SrStepResult sr_iteration(const Graph& g, const RbmParams& p, ChainState& chain,
                          const VmcConfig& cfg) {
  const SrBatch batch = sample_batch(g, p, chain, cfg);
  const Forces forces = estimate_forces(batch);
  const MetricOperator metric(batch, cfg.lambda_reg);
  const int max_iter = cfg.minres_max_iter > 0 ? cfg.minres_max_iter : p.num_params();
  const MinresResult solve = minres_solve(
      [&metric](const Eigen::VectorXd& x) { return metric.apply(x); }, forces.gradient,
      cfg.minres_tol, max_iter);

  SrStepResult out;
  out.params = RbmParams::unpack(p.num_visible(), p.num_hidden(),
                                 p.pack() - cfg.learning_rate * solve.x);
  if (!out.params.all_finite()) throw NumericalError("sr_iteration: non-finite parameters");
  refresh_chain(out.params, chain);

  Eigen::Index best_row = 0;
  out.diagnostics.batch_min_energy = batch.e_loc.minCoeff(&best_row);
  out.diagnostics.batch_min_theta = RotorConfig(batch.samples.row(best_row).transpose());
  out.diagnostics.e_mean = forces.e_mean;
  out.diagnostics.accept_rate = batch.accept_rate;
  out.diagnostics.residual = solve.residual;
  out.diagnostics.minres_iters = solve.iters;
  return out;
}

RunTrace run_vmc(const Graph& g, const VmcConfig& cfg, const RbmParams& init,
                 const IterationCallback& on_iteration) {
  cfg.validate();
  if (init.num_visible() != g.num_vertices())
    throw std::invalid_argument("run_vmc: parameter visible count does not match the graph");
  const auto start = std::chrono::steady_clock::now();

  RunTrace trace;
  trace.records.reserve(cfg.n_iter);
  trace.best_energy = std::numeric_limits<double>::infinity();
  RbmParams params = init;
  ChainState chain = make_chain(params, cfg.proposal_step, cfg.seed);

  for (int it = 0; it < cfg.n_iter; ++it) {
    SrStepResult step = sr_iteration(g, params, chain, cfg);
    params = std::move(step.params);
    const SrDiagnostics& d = step.diagnostics;
    if (d.batch_min_energy < trace.best_energy) {
      trace.best_energy = d.batch_min_energy;
      trace.best_theta = d.batch_min_theta;
    }
    IterationRecord record{it + 1, d.e_mean, d.accept_rate, d.residual, trace.best_energy};
    trace.records.push_back(record);
    if (on_iteration) on_iteration(record);
  }

  trace.final_params = std::move(params);
  trace.best_cut = procedure_cut(g, trace.best_theta);
  trace.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return trace;
}

void write_trace_csv(std::ostream& out, const RunTrace& trace) {
  out << "iteration,e_mean,accept_rate,residual,best_energy\n";
  out << std::setprecision(17);
  for (const IterationRecord& r : trace.records)
    out << r.iteration << ',' << r.e_mean << ',' << r.accept_rate << ',' << r.residual << ','
        << r.best_energy << '\n';
}

}  // namespace rotorcut
