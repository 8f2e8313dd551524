#pragma once

// Bound-constrained nonlinear least squares by the trust-region reflective
// method (Branch, Coleman & Li 1999), exact trust-region subproblems via SVD.
// Minimizes 0.5 |f(x)|^2 subject to lb <= x <= ub.

#include <functional>

#include <Eigen/Dense>

namespace fomcell {

using ResidualFn = std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& f)>;

struct LsqOptions {
  double ftol = 1e-12;  // relative cost reduction
  double xtol = 1e-12;  // relative step size
  double gtol = 1e-14;  // scaled gradient, infinity norm
  int max_iter = 200;
  int max_nfev = 0;     // 0: 20 * max_iter
  double diff_rel_step = 1e-7;
  double diff_abs_step = 1e-7;
};

enum class LsqStatus {
  max_evaluations = 0,
  gtol = 1,
  ftol = 2,
  xtol = 3,
  ftol_and_xtol = 4,
};

struct LsqResult {
  Eigen::VectorXd x;
  Eigen::VectorXd fun;
  Eigen::MatrixXd jac;
  Eigen::VectorXd grad;
  double cost = 0.0;  // 0.5 |f|^2
  double optimality = 0.0;
  int nfev = 0;
  int njev = 0;
  int iterations = 0;
  LsqStatus status = LsqStatus::max_evaluations;
  bool converged() const noexcept { return status != LsqStatus::max_evaluations; }
};

/// Forward-difference Jacobian with step max(abs_step, rel_step |x_j|); the
/// step is reversed where a forward step would leave [lb, ub]. f0 = f(x).
Eigen::MatrixXd forward_jacobian(const ResidualFn& fun, const Eigen::VectorXd& x, const Eigen::VectorXd& f0,
                                 const Eigen::VectorXd& lb, const Eigen::VectorXd& ub, double rel_step = 1e-7,
                                 double abs_step = 1e-7, int* nfev = nullptr);

/// x0 must lie within the bounds; it is nudged strictly inside first. Every
/// point passed to fun lies within [lb, ub].
LsqResult trf_solve(const ResidualFn& fun, const Eigen::VectorXd& x0, const Eigen::VectorXd& lb,
                    const Eigen::VectorXd& ub, const LsqOptions& opt = {});

}  // namespace fomcell
