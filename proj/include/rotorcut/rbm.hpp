#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "rotorcut/rotor.hpp"

namespace rotorcut {

/// Parameters of the rotor RBM
///
///   psi(theta) = int d^m phi exp( sum_ij a_ij <z_i, v_j> + sum_i <b_i, z_i>
///                                 + sum_j <c_j, v_j> )
///
/// with v_j = (cos theta_j, sin theta_j) and z_i = (cos phi_i, sin phi_i).
///
/// Packed layout (version 1), P = n*m + 2(n + m):
///   [0, n*m)               a, row-major (index i*n + j)
///   [n*m, n*m + 2m)        b_i as (x, y) pairs
///   [n*m + 2m, P)          c_j as (x, y) pairs
struct RbmParams {
  Eigen::MatrixXd a;  // m x n
  Eigen::MatrixXd b;  // m x 2
  Eigen::MatrixXd c;  // n x 2

  RbmParams() = default;
  RbmParams(int n, int m);

  int num_visible() const { return static_cast<int>(c.rows()); }
  int num_hidden() const { return static_cast<int>(b.rows()); }
  int num_params() const { return packed_size(num_visible(), num_hidden()); }

  static int packed_size(int n, int m) { return n * m + 2 * (n + m); }

  Eigen::VectorXd pack() const;
  static RbmParams unpack(int n, int m, const Eigen::VectorXd& packed);

  bool all_finite() const;
};

inline constexpr std::uint32_t kPackingVersion = 1;

/// Effective hidden fields u_i = b_i + sum_j a_ij v_j, one row per hidden unit.
Eigen::MatrixXd hidden_fields(const RbmParams& p, const RotorConfig& theta);

/// ln psi(theta) = sum_j <c_j, v_j> + sum_i [ln 2pi + ln I0(|u_i|)].
double log_psi(const RbmParams& p, const RotorConfig& theta);

/// Packed gradient of log_psi with respect to the parameters:
///   d/dc_j = v_j,  d/db_i = r(|u_i|) u_i/|u_i|,  d/da_ij = r(|u_i|) <u_i/|u_i|, v_j>,
/// where r = I1/I0. Blocks of hidden units with u_i = 0 are exactly zero.
Eigen::VectorXd log_derivatives(const RbmParams& p, const RotorConfig& theta);

/// Both quantities from one pass over the hidden fields.
struct RbmEvaluation {
  double log_psi = 0.0;
  Eigen::VectorXd derivatives;
};
RbmEvaluation evaluate(const RbmParams& p, const RotorConfig& theta);

/// Hidden count m = round(alpha * n); throws unless m >= 1.
int hidden_count(int n, double alpha);

/// a ~ Normal(0, sigma^2) i.i.d., b = 0, c = 0.
RbmParams init_random(int n, double alpha, double sigma, std::uint64_t seed);

/// Visible biases c_j = r (cos theta*_j, sin theta*_j), b = 0,
/// a ~ Normal(0, sigma^2) i.i.d.
RbmParams init_pretrained(const RotorConfig& theta_star, double alpha, double r, double sigma,
                          std::uint64_t seed);

inline constexpr double kDefaultWeightSigma = 0.1;
inline constexpr double kDefaultPretrainRadius = 1.0;

}  // namespace rotorcut
