#include "rotorcut/rbm.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rotorcut/bessel.hpp"
#include "rotorcut/rng.hpp"

namespace rotorcut {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

void check_dims(const RbmParams& p, const RotorConfig& theta, const char* who) {
  const int n = p.num_visible();
  const int m = p.num_hidden();
  if (p.a.rows() != m || p.a.cols() != n || p.b.cols() != 2 || p.c.cols() != 2)
    throw std::invalid_argument(std::string(who) + ": inconsistent parameter shapes");
  if (theta.size() != n)
    throw std::invalid_argument(std::string(who) + ": angle count does not match visible units");
}

Eigen::MatrixXd visible_vectors(const RotorConfig& theta) {
  const int n = theta.size();
  Eigen::MatrixXd v(n, 2);
  for (int j = 0; j < n; ++j) {
    v(j, 0) = std::cos(theta[j]);
    v(j, 1) = std::sin(theta[j]);
  }
  return v;
}

}  // namespace

RbmParams::RbmParams(int n, int m)
    : a(Eigen::MatrixXd::Zero(m, n)), b(Eigen::MatrixXd::Zero(m, 2)), c(Eigen::MatrixXd::Zero(n, 2)) {
  if (n < 1 || m < 1) throw std::invalid_argument("RbmParams: need n >= 1 and m >= 1");
}

Eigen::VectorXd RbmParams::pack() const {
  const int n = num_visible();
  const int m = num_hidden();
  Eigen::VectorXd out(packed_size(n, m));
  int k = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) out[k++] = a(i, j);
  for (int i = 0; i < m; ++i) {
    out[k++] = b(i, 0);
    out[k++] = b(i, 1);
  }
  for (int j = 0; j < n; ++j) {
    out[k++] = c(j, 0);
    out[k++] = c(j, 1);
  }
  return out;
}

RbmParams RbmParams::unpack(int n, int m, const Eigen::VectorXd& packed) {
  if (packed.size() != packed_size(n, m))
    throw std::invalid_argument("RbmParams::unpack: packed vector has the wrong length");
  RbmParams p(n, m);
  int k = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) p.a(i, j) = packed[k++];
  for (int i = 0; i < m; ++i) {
    p.b(i, 0) = packed[k++];
    p.b(i, 1) = packed[k++];
  }
  for (int j = 0; j < n; ++j) {
    p.c(j, 0) = packed[k++];
    p.c(j, 1) = packed[k++];
  }
  return p;
}

bool RbmParams::all_finite() const {
  return a.allFinite() && b.allFinite() && c.allFinite();
}

Eigen::MatrixXd hidden_fields(const RbmParams& p, const RotorConfig& theta) {
  check_dims(p, theta, "hidden_fields");
  return p.b + p.a * visible_vectors(theta);
}

double log_psi(const RbmParams& p, const RotorConfig& theta) {
  check_dims(p, theta, "log_psi");
  const Eigen::MatrixXd v = visible_vectors(theta);
  const Eigen::MatrixXd u = p.b + p.a * v;
  double value = p.c.cwiseProduct(v).sum();
  for (Eigen::Index i = 0; i < u.rows(); ++i) value += kLogTwoPi + log_bessel_i0(u.row(i).norm());
  return value;
}

RbmEvaluation evaluate(const RbmParams& p, const RotorConfig& theta) {
  check_dims(p, theta, "log_derivatives");
  const int n = p.num_visible();
  const int m = p.num_hidden();
  const Eigen::MatrixXd v = visible_vectors(theta);
  const Eigen::MatrixXd u = p.b + p.a * v;

  RbmEvaluation out;
  out.log_psi = p.c.cwiseProduct(v).sum();
  out.derivatives = Eigen::VectorXd::Zero(p.num_params());
  const int b_offset = n * m;
  const int c_offset = n * m + 2 * m;
  for (int i = 0; i < m; ++i) {
    const double norm = u.row(i).norm();
    out.log_psi += kLogTwoPi + log_bessel_i0(norm);
    if (norm == 0.0) continue;  // analytic limit: the whole block vanishes
    const double scale = bessel_ratio(norm) / norm;
    const double ux = scale * u(i, 0);
    const double uy = scale * u(i, 1);
    out.derivatives[b_offset + 2 * i] = ux;
    out.derivatives[b_offset + 2 * i + 1] = uy;
    for (int j = 0; j < n; ++j) out.derivatives[i * n + j] = ux * v(j, 0) + uy * v(j, 1);
  }
  for (int j = 0; j < n; ++j) {
    out.derivatives[c_offset + 2 * j] = v(j, 0);
    out.derivatives[c_offset + 2 * j + 1] = v(j, 1);
  }
  return out;
}

Eigen::VectorXd log_derivatives(const RbmParams& p, const RotorConfig& theta) {
  return evaluate(p, theta).derivatives;
}

int hidden_count(int n, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("hidden density alpha must be positive");
  const long m = std::lround(alpha * n);
  if (m < 1) throw std::invalid_argument("alpha * n must round to at least one hidden unit");
  return static_cast<int>(m);
}

RbmParams init_random(int n, double alpha, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("init_random: sigma must be non-negative");
  RbmParams p(n, hidden_count(n, alpha));
  Rng rng(seed, /*stream=*/1);
  for (Eigen::Index i = 0; i < p.a.rows(); ++i)
    for (Eigen::Index j = 0; j < p.a.cols(); ++j) p.a(i, j) = sigma * rng.normal();
  return p;
}

RbmParams init_pretrained(const RotorConfig& theta_star, double alpha, double r, double sigma,
                          std::uint64_t seed) {
  if (!(r >= 0.0)) throw std::invalid_argument("init_pretrained: r must be non-negative");
  RbmParams p = init_random(theta_star.size(), alpha, sigma, seed);
  for (int j = 0; j < theta_star.size(); ++j) {
    p.c(j, 0) = r * std::cos(theta_star[j]);
    p.c(j, 1) = r * std::sin(theta_star[j]);
  }
  return p;
}

}  // namespace rotorcut
