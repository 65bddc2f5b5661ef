#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>

namespace rotorcut {

using LinearOperator = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct MinresResult {
  Eigen::VectorXd x;
  double residual = 0.0;  // ||A x - b||, recomputed explicitly on exit
  int iters = 0;
  bool converged = false;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// MINRES (Paige-Saunders) for a symmetric, possibly indefinite or singular
/// operator, started from x = 0. Stops when the recurrence residual falls to
/// tol * ||b||, the Krylov space is exhausted, or max_iter is reached.
/// Throws NumericalError if a non-finite value appears.
MinresResult minres_solve(const LinearOperator& apply, const Eigen::VectorXd& rhs, double tol,
                          int max_iter);

}  // namespace rotorcut
