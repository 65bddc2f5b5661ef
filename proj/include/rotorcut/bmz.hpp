#pragma once

#include <vector>

#include "rotorcut/graph.hpp"
#include "rotorcut/rotor.hpp"

namespace rotorcut {

struct BmzConfig {
  int max_iters = 500;
  double grad_tol = 1e-8;  // on the infinity norm of the gradient
  double tr_radius_init = 1.0;
  double tr_radius_max = 10.0;
  double accept_ratio_lo = 0.25;  // shrink the radius below this ratio
  double accept_ratio_hi = 0.75;  // expand it above this ratio

  void validate() const;
};

struct BmzResult {
  RotorConfig theta;
  double energy = 0.0;
  int iters = 0;
  double grad_norm_inf = 0.0;
  /// Energy after each accepted step, starting with the initial energy.
  std::vector<double> energy_history;
};

/// Trust-region Newton minimisation of the rotor cost. The quadratic model is
/// minimised inside the region by Steihaug-Toint truncated CG on the sparse
/// Hessian; steps are taken only when the true cost decreases.
BmzResult bmz_minimize(const Graph& g, const RotorConfig& theta0, const BmzConfig& cfg = {});

struct ProcedureCutResult {
  double value = 0.0;
  CutAssignment x;
  int anchor = 0;  // vertex whose angle defined the winning half-circle
};

/// Rounds angles to a cut. For each vertex angle Gamma, vertices with
/// (theta_i - Gamma) mod 2pi in [0, pi) go to +1 and the rest to -1; the best
/// of these n cuts is returned (lowest anchor index on ties).
ProcedureCutResult procedure_cut(const Graph& g, const RotorConfig& theta);

}  // namespace rotorcut
