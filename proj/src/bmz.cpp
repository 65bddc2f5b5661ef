#include "rotorcut/bmz.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace rotorcut {

namespace {

// Reduction cost(theta) - cost(theta + step), evaluated termwise with
// cos a - cos b = -2 sin((a+b)/2) sin((a-b)/2) so that it stays accurate when
// the reduction is far below the magnitude of the cost itself.
double cost_reduction(const Graph& g, const Eigen::VectorXd& theta, const Eigen::VectorXd& step) {
  double sum = 0.0;
  for (const Edge& e : g.edges()) {
    const double before = theta[e.i] - theta[e.j];
    const double after = before + step[e.i] - step[e.j];
    sum += e.w * (-2.0 * std::sin(0.5 * (before + after)) * std::sin(0.5 * (before - after)));
  }
  return sum;
}

// Positive root tau of ||p + tau d|| = radius.
double to_boundary(const Eigen::VectorXd& p, const Eigen::VectorXd& d, double radius) {
  const double dd = d.squaredNorm();
  const double pd = p.dot(d);
  const double pp = p.squaredNorm();
  const double disc = std::max(0.0, pd * pd + dd * (radius * radius - pp));
  return (-pd + std::sqrt(disc)) / dd;
}

struct SubproblemStep {
  Eigen::VectorXd p;
  bool on_boundary = false;
};

SubproblemStep steihaug_cg(const SparseSymmetric& hess, const Eigen::VectorXd& grad,
                           double radius) {
  const Eigen::Index n = grad.size();
  Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd r = grad;
  Eigen::VectorXd d = -r;
  const double gnorm = grad.norm();
  const double tol = std::min(0.5, std::sqrt(gnorm)) * gnorm;
  double rr = r.squaredNorm();

  for (Eigen::Index k = 0; k < 2 * n; ++k) {
    const Eigen::VectorXd hd = hess.multiply(d);
    const double curvature = d.dot(hd);
    if (curvature <= 0.0) {
      return {p + to_boundary(p, d, radius) * d, true};
    }
    const double alpha = rr / curvature;
    Eigen::VectorXd next = p + alpha * d;
    if (next.norm() >= radius) {
      return {p + to_boundary(p, d, radius) * d, true};
    }
    p = std::move(next);
    r += alpha * hd;
    const double rr_next = r.squaredNorm();
    if (std::sqrt(rr_next) <= tol) break;
    d = -r + (rr_next / rr) * d;
    rr = rr_next;
  }
  return {p, false};
}

}  // namespace

void BmzConfig::validate() const {
  if (!(grad_tol > 0.0)) throw std::invalid_argument("BmzConfig: grad_tol must be positive");
  if (!(0.0 < accept_ratio_lo && accept_ratio_lo < accept_ratio_hi && accept_ratio_hi < 1.0))
    throw std::invalid_argument("BmzConfig: need 0 < accept_ratio_lo < accept_ratio_hi < 1");
  if (!(tr_radius_init > 0.0 && tr_radius_max >= tr_radius_init))
    throw std::invalid_argument("BmzConfig: need 0 < tr_radius_init <= tr_radius_max");
  if (max_iters < 0) throw std::invalid_argument("BmzConfig: max_iters must be non-negative");
}

BmzResult bmz_minimize(const Graph& g, const RotorConfig& theta0, const BmzConfig& cfg) {
  cfg.validate();
  if (theta0.size() != g.num_vertices())
    throw std::invalid_argument("bmz_minimize: angle count does not match vertex count");

  // Iterate in unwrapped coordinates; wrap only on output.
  Eigen::VectorXd theta = theta0.angles();
  double energy = cost(g, theta0);
  double radius = cfg.tr_radius_init;

  BmzResult result;
  result.energy_history.push_back(energy);

  int iter = 0;
  for (; iter < cfg.max_iters; ++iter) {
    const RotorConfig current(theta);
    const Eigen::VectorXd grad = cost_gradient(g, current);
    if (grad.lpNorm<Eigen::Infinity>() <= cfg.grad_tol) break;

    const SparseSymmetric hess = cost_hessian(g, current);
    const SubproblemStep step = steihaug_cg(hess, grad, radius);
    const double predicted = -(grad.dot(step.p) + 0.5 * step.p.dot(hess.multiply(step.p)));
    const double actual = cost_reduction(g, theta, step.p);
    const double ratio = predicted > 0.0 ? actual / predicted : (actual > 0.0 ? 1.0 : -1.0);

    if (ratio < cfg.accept_ratio_lo) {
      radius *= 0.25;
    } else if (ratio > cfg.accept_ratio_hi && step.on_boundary) {
      radius = std::min(2.0 * radius, cfg.tr_radius_max);
    }
    if (actual > 0.0 && ratio > 0.0) {
      theta += step.p;
      energy = cost(g, RotorConfig(theta));
      result.energy_history.push_back(energy);
    }
  }

  result.theta = RotorConfig(theta);
  result.energy = cost(g, result.theta);
  result.iters = iter;
  result.grad_norm_inf = cost_gradient(g, result.theta).lpNorm<Eigen::Infinity>();
  return result;
}

ProcedureCutResult procedure_cut(const Graph& g, const RotorConfig& theta) {
  const int n = g.num_vertices();
  if (theta.size() != n)
    throw std::invalid_argument("procedure_cut: angle count does not match vertex count");

  ProcedureCutResult best;
  best.value = -std::numeric_limits<double>::infinity();
  CutAssignment x(n);
  for (int k = 0; k < n; ++k) {
    const double anchor = theta[k];
    for (int i = 0; i < n; ++i) x[i] = wrap_angle(theta[i] - anchor) < std::numbers::pi ? 1 : -1;
    const double value = cut_value(g, x);
    if (value > best.value) {
      best.value = value;
      best.x = x;
      best.anchor = k;
    }
  }
  return best;
}

}  // namespace rotorcut
