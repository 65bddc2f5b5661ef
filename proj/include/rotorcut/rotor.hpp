#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rotorcut/graph.hpp"

namespace rotorcut {

/// Planar rotor angles, one per vertex, stored reduced to [0, 2*pi).
class RotorConfig {
 public:
  RotorConfig() = default;
  explicit RotorConfig(Eigen::VectorXd angles);

  static RotorConfig random(int n, class Rng& rng);

  int size() const { return static_cast<int>(angles_.size()); }
  const Eigen::VectorXd& angles() const { return angles_; }
  double operator[](int i) const { return angles_[i]; }

 private:
  Eigen::VectorXd angles_;
};

/// Reduces an angle to [0, 2*pi).
double wrap_angle(double theta);

/// Symmetric sparse matrix as triplets. Off-diagonal entries appear in both
/// orientations; every diagonal entry is present, even when zero.
struct SparseSymmetric {
  struct Entry {
    int row;
    int col;
    double value;
  };
  int n = 0;
  std::vector<Entry> entries;

  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd to_dense() const;
};

/// sum_{ij in E} w_ij cos(theta_i - theta_j).
double cost(const Graph& g, const RotorConfig& theta);
/// d cost / d theta_i = -sum_j w_ij sin(theta_i - theta_j).
Eigen::VectorXd cost_gradient(const Graph& g, const RotorConfig& theta);
SparseSymmetric cost_hessian(const Graph& g, const RotorConfig& theta);

inline constexpr int kHeisenbergMaxVertices = 10;

/// tr(H rho) for H = sum w_ij (X_i X_j + Z_i Z_j) and the product state
/// rho = (x)_i (I + sin(theta_i) X_i + cos(theta_i) Z_i) / 2, both assembled as
/// dense 2^n x 2^n matrices. Vertex i maps to bit i of the basis index.
double heisenberg_expectation(const Graph& g, const RotorConfig& theta);

}  // namespace rotorcut
