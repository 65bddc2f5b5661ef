#include "rotorcut/minres.hpp"

#include <cmath>
#include <limits>

namespace rotorcut {

MinresResult minres_solve(const LinearOperator& apply, const Eigen::VectorXd& rhs, double tol,
                          int max_iter) {
  if (!rhs.allFinite()) throw NumericalError("minres_solve: non-finite right-hand side");
  const Eigen::Index n = rhs.size();
  MinresResult out;
  out.x = Eigen::VectorXd::Zero(n);

  const double beta1 = rhs.norm();
  if (beta1 == 0.0) {
    out.converged = true;
    return out;
  }

  Eigen::VectorXd r1 = rhs;
  Eigen::VectorXd r2 = rhs;
  Eigen::VectorXd y = rhs;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd w1(n);
  Eigen::VectorXd w2 = Eigen::VectorXd::Zero(n);
  double old_beta = 0.0;
  double beta = beta1;
  double dbar = 0.0;
  double epsilon = 0.0;
  double phibar = beta1;
  double cs = -1.0;
  double sn = 0.0;

  int iter = 0;
  while (iter < max_iter) {
    ++iter;
    const Eigen::VectorXd v = y / beta;
    y = apply(v);
    if (iter >= 2) y -= (beta / old_beta) * r1;
    const double alpha = v.dot(y);
    y -= (alpha / beta) * r2;
    r1 = r2;
    r2 = y;
    old_beta = beta;
    beta = y.norm();

    // Apply the previous rotation, then build the one that zeroes beta.
    const double old_epsilon = epsilon;
    const double delta = cs * dbar + sn * alpha;
    const double gbar = sn * dbar - cs * alpha;
    epsilon = sn * beta;
    dbar = -cs * beta;
    const double gamma = std::max(std::hypot(gbar, beta), std::numeric_limits<double>::epsilon());
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;

    w1 = w2;
    w2 = w;
    w = (v - old_epsilon * w1 - delta * w2) / gamma;
    out.x += phi * w;

    if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(phibar))
      throw NumericalError("minres_solve: non-finite value in Lanczos recurrence");
    if (phibar <= tol * beta1 || beta == 0.0) {
      out.converged = true;
      break;
    }
  }

  if (!out.x.allFinite()) throw NumericalError("minres_solve: non-finite solution");
  out.iters = iter;
  out.residual = (apply(out.x) - rhs).norm();
  if (!std::isfinite(out.residual)) throw NumericalError("minres_solve: non-finite residual");
  return out;
}

}  // namespace rotorcut
