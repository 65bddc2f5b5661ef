#include "rotorcut/rotor.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rotorcut/rng.hpp"

namespace rotorcut {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_size(const Graph& g, const RotorConfig& theta, const char* who) {
  if (theta.size() != g.num_vertices())
    throw std::invalid_argument(std::string(who) + ": angle count does not match vertex count");
}

}  // namespace

double wrap_angle(double theta) {
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

RotorConfig::RotorConfig(Eigen::VectorXd angles) : angles_(std::move(angles)) {
  for (Eigen::Index i = 0; i < angles_.size(); ++i) {
    if (!std::isfinite(angles_[i])) throw std::invalid_argument("RotorConfig: non-finite angle");
    angles_[i] = wrap_angle(angles_[i]);
  }
}

RotorConfig RotorConfig::random(int n, Rng& rng) {
  Eigen::VectorXd a(n);
  for (int i = 0; i < n; ++i) a[i] = kTwoPi * rng.uniform();
  return RotorConfig(std::move(a));
}

Eigen::VectorXd SparseSymmetric::multiply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  for (const Entry& e : entries) y[e.row] += e.value * x[e.col];
  return y;
}

Eigen::MatrixXd SparseSymmetric::to_dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const Entry& e : entries) m(e.row, e.col) += e.value;
  return m;
}

double cost(const Graph& g, const RotorConfig& theta) {
  check_size(g, theta, "cost");
  double sum = 0.0;
  for (const Edge& e : g.edges()) sum += e.w * std::cos(theta[e.i] - theta[e.j]);
  return sum;
}

Eigen::VectorXd cost_gradient(const Graph& g, const RotorConfig& theta) {
  check_size(g, theta, "cost_gradient");
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(g.num_vertices());
  for (const Edge& e : g.edges()) {
    const double s = e.w * std::sin(theta[e.i] - theta[e.j]);
    grad[e.i] -= s;
    grad[e.j] += s;
  }
  return grad;
}

SparseSymmetric cost_hessian(const Graph& g, const RotorConfig& theta) {
  check_size(g, theta, "cost_hessian");
  const int n = g.num_vertices();
  SparseSymmetric h;
  h.n = n;
  h.entries.reserve(n + 2 * g.edges().size());
  std::vector<double> diag(n, 0.0);
  for (const Edge& e : g.edges()) {
    const double c = e.w * std::cos(theta[e.i] - theta[e.j]);
    h.entries.push_back({e.i, e.j, c});
    h.entries.push_back({e.j, e.i, c});
    diag[e.i] -= c;
    diag[e.j] -= c;
  }
  for (int i = 0; i < n; ++i) h.entries.push_back({i, i, diag[i]});
  return h;
}

double heisenberg_expectation(const Graph& g, const RotorConfig& theta) {
  check_size(g, theta, "heisenberg_expectation");
  const int n = g.num_vertices();
  if (n > kHeisenbergMaxVertices)
    throw std::invalid_argument("heisenberg_expectation: at most " +
                                std::to_string(kHeisenbergMaxVertices) + " vertices");
  const Eigen::Index dim = Eigen::Index{1} << n;

  // Z|0> = |0>, Z|1> = -|1>; X flips the bit.
  Eigen::MatrixXd hamiltonian = Eigen::MatrixXd::Zero(dim, dim);
  for (const Edge& e : g.edges()) {
    const Eigen::Index mask = (Eigen::Index{1} << e.i) | (Eigen::Index{1} << e.j);
    for (Eigen::Index s = 0; s < dim; ++s) {
      const bool bi = (s >> e.i) & 1;
      const bool bj = (s >> e.j) & 1;
      hamiltonian(s, s) += e.w * (bi == bj ? 1.0 : -1.0);
      hamiltonian(s, s ^ mask) += e.w;
    }
  }

  // Kronecker product, most significant factor last so that vertex i is bit i.
  Eigen::MatrixXd rho = Eigen::MatrixXd::Ones(1, 1);
  for (int i = 0; i < n; ++i) {
    Eigen::Matrix2d factor;
    const double c = std::cos(theta[i]);
    const double s = std::sin(theta[i]);
    factor << 0.5 * (1.0 + c), 0.5 * s, 0.5 * s, 0.5 * (1.0 - c);
    const Eigen::Index d = rho.rows();
    Eigen::MatrixXd next(2 * d, 2 * d);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) next.block(a * d, b * d, d, d) = factor(a, b) * rho;
    rho = std::move(next);
  }

  // tr(H rho) = sum_st H_st rho_ts.
  return hamiltonian.cwiseProduct(rho.transpose()).sum();
}

}  // namespace rotorcut
