#include "fomcell/trf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fomcell/error.hpp"

namespace fomcell {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

bool in_bounds(const VectorXd& x, const VectorXd& lb, const VectorXd& ub) {
  return ((x.array() >= lb.array()) && (x.array() <= ub.array())).all();
}

// Smallest step along s that reaches a bound, and the signed mask of the
// components that hit it.
std::pair<double, Eigen::VectorXi> step_size_to_bound(const VectorXd& x, const VectorXd& s, const VectorXd& lb,
                                                      const VectorXd& ub) {
  const Eigen::Index n = x.size();
  VectorXd steps = VectorXd::Constant(n, kInf);
  for (Eigen::Index j = 0; j < n; ++j)
    if (s[j] != 0.0) steps[j] = std::max((lb[j] - x[j]) / s[j], (ub[j] - x[j]) / s[j]);
  const double m = steps.minCoeff();
  Eigen::VectorXi hits = Eigen::VectorXi::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j)
    if (steps[j] == m) hits[j] = s[j] > 0.0 ? 1 : (s[j] < 0.0 ? -1 : 0);
  return {m, hits};
}

// Roots t1 <= t2 of |x + t s| = Delta; x must lie inside the region.
std::pair<double, double> intersect_trust_region(const VectorXd& x, const VectorXd& s, double delta) {
  const double a = s.squaredNorm();
  if (a == 0.0) fail(ErrorCode::invalid_argument, "trust-region intersection with a zero direction");
  const double b = x.dot(s);
  const double c = x.squaredNorm() - delta * delta;
  if (c > 0.0) fail(ErrorCode::invalid_argument, "point lies outside the trust region");
  const double d = std::sqrt(b * b - a * c);
  const double q = -(b + std::copysign(d, b));
  const double t1 = q / a;
  const double t2 = c / q;
  return t1 < t2 ? std::pair{t1, t2} : std::pair{t2, t1};
}

Eigen::VectorXi find_active_constraints(const VectorXd& x, const VectorXd& lb, const VectorXd& ub, double rtol) {
  Eigen::VectorXi active = Eigen::VectorXi::Zero(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (rtol == 0.0) {
      if (x[j] <= lb[j]) active[j] = -1;
      else if (x[j] >= ub[j]) active[j] = 1;
      continue;
    }
    const double lower_dist = x[j] - lb[j];
    const double upper_dist = ub[j] - x[j];
    const double lower_thr = rtol * std::max(1.0, std::abs(lb[j]));
    const double upper_thr = rtol * std::max(1.0, std::abs(ub[j]));
    if (std::isfinite(lb[j]) && lower_dist <= std::min(upper_dist, lower_thr)) active[j] = -1;
    else if (std::isfinite(ub[j]) && upper_dist <= std::min(lower_dist, upper_thr)) active[j] = 1;
  }
  return active;
}

VectorXd make_strictly_feasible(const VectorXd& x, const VectorXd& lb, const VectorXd& ub, double rstep) {
  VectorXd out = x;
  const Eigen::VectorXi active = find_active_constraints(x, lb, ub, rstep);
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (active[j] == -1)
      out[j] = rstep == 0.0 ? std::nextafter(lb[j], ub[j]) : lb[j] + rstep * std::max(1.0, std::abs(lb[j]));
    else if (active[j] == 1)
      out[j] = rstep == 0.0 ? std::nextafter(ub[j], lb[j]) : ub[j] - rstep * std::max(1.0, std::abs(ub[j]));
    if (out[j] < lb[j] || out[j] > ub[j]) out[j] = 0.5 * (lb[j] + ub[j]);
  }
  return out;
}

// Coleman-Li scaling vector v and its derivative sign dv.
void cl_scaling_vector(const VectorXd& x, const VectorXd& g, const VectorXd& lb, const VectorXd& ub, VectorXd& v,
                       VectorXd& dv) {
  v.setOnes(x.size());
  dv.setZero(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (g[j] < 0.0 && std::isfinite(ub[j])) {
      v[j] = ub[j] - x[j];
      dv[j] = -1.0;
    } else if (g[j] > 0.0 && std::isfinite(lb[j])) {
      v[j] = x[j] - lb[j];
      dv[j] = 1.0;
    }
  }
}

struct Quadratic1D {
  double a, b, c;
};

// q(t) = 0.5 |J (s0 + t s)|^2 + g.(s0 + t s) + 0.5 (s0 + t s).diag.(s0 + t s), as a t^2 + b t + c.
Quadratic1D build_quadratic_1d(const MatrixXd& J, const VectorXd& g, const VectorXd& s, const VectorXd& diag,
                               const VectorXd* s0 = nullptr) {
  const VectorXd v = J * s;
  double a = 0.5 * (v.squaredNorm() + s.dot(diag.cwiseProduct(s)));
  double b = g.dot(s);
  double c = 0.0;
  if (s0) {
    const VectorXd u = J * (*s0);
    b += u.dot(v) + s0->cwiseProduct(diag).dot(s);
    c = 0.5 * u.squaredNorm() + g.dot(*s0) + 0.5 * s0->cwiseProduct(diag).dot(*s0);
  }
  return {a, b, c};
}

std::pair<double, double> minimize_quadratic_1d(const Quadratic1D& q, double lo, double hi) {
  auto value = [&](double t) { return t * (q.a * t + q.b) + q.c; };
  double best_t = lo;
  double best_y = value(lo);
  auto consider = [&](double t) {
    const double y = value(t);
    if (y < best_y) {
      best_y = y;
      best_t = t;
    }
  };
  consider(hi);
  if (q.a != 0.0) {
    const double ext = -0.5 * q.b / q.a;
    if (lo < ext && ext < hi) consider(ext);
  }
  return {best_t, best_y};
}

double evaluate_quadratic(const MatrixXd& J, const VectorXd& g, const VectorXd& s, const VectorXd& diag) {
  const VectorXd Js = J * s;
  return 0.5 * (Js.squaredNorm() + s.dot(diag.cwiseProduct(s))) + s.dot(g);
}

struct TrSolution {
  VectorXd p;
  double alpha;
};

// More's method for min |J p + f| subject to |p| <= Delta using J = U S V^T.
TrSolution solve_lsq_trust_region(Eigen::Index n, Eigen::Index m, const VectorXd& uf, const VectorXd& s,
                                  const MatrixXd& V, double delta, double initial_alpha) {
  const VectorXd suf = s.cwiseProduct(uf);
  auto phi_and_derivative = [&](double alpha, double& phi, double& phi_prime) {
    const VectorXd denom = s.array().square() + alpha;
    const double p_norm = (suf.array() / denom.array()).matrix().norm();
    phi = p_norm - delta;
    phi_prime = -(suf.array().square() / denom.array().cube()).sum() / p_norm;
  };

  bool full_rank = false;
  if (m >= n) full_rank = s[s.size() - 1] > kEps * static_cast<double>(m) * s[0];
  if (full_rank) {
    const VectorXd p = -V * (uf.array() / s.array()).matrix();
    if (p.norm() <= delta) return {p, 0.0};
  }
  double alpha_upper = suf.norm() / delta;
  double alpha_lower = 0.0;
  if (full_rank) {
    double phi = 0.0;
    double phi_prime = 0.0;
    phi_and_derivative(0.0, phi, phi_prime);
    alpha_lower = -phi / phi_prime;
  }
  double alpha = initial_alpha;
  if (!full_rank && initial_alpha == 0.0)
    alpha = std::max(0.001 * alpha_upper, std::sqrt(alpha_lower * alpha_upper));
  for (int it = 0; it < 10; ++it) {
    if (alpha < alpha_lower || alpha > alpha_upper)
      alpha = std::max(0.001 * alpha_upper, std::sqrt(alpha_lower * alpha_upper));
    double phi = 0.0;
    double phi_prime = 0.0;
    phi_and_derivative(alpha, phi, phi_prime);
    if (phi < 0.0) alpha_upper = alpha;
    const double ratio = phi / phi_prime;
    alpha_lower = std::max(alpha_lower, alpha - ratio);
    alpha -= (phi + delta) * ratio / delta;
    if (std::abs(phi) < 0.01 * delta) break;
  }
  VectorXd p = -V * (suf.array() / (s.array().square() + alpha)).matrix();
  // Land exactly on the boundary so later geometry sees a point inside it.
  p *= delta / p.norm();
  return {p, alpha};
}

std::pair<double, double> update_tr_radius(double delta, double actual, double predicted, double step_norm,
                                           bool bound_hit) {
  double ratio = 0.0;
  if (predicted > 0.0) ratio = actual / predicted;
  else if (predicted == 0.0 && actual == 0.0) ratio = 1.0;
  if (ratio < 0.25) delta = 0.25 * step_norm;
  else if (ratio > 0.75 && bound_hit) delta *= 2.0;
  return {delta, ratio};
}

struct Step {
  VectorXd step;
  VectorXd step_h;
  double predicted_reduction;
};

// Chooses among the truncated trust-region step, its reflection off the
// first bound hit, and the scaled Cauchy step.
Step select_step(const VectorXd& x, const MatrixXd& J_h, const VectorXd& diag_h, const VectorXd& g_h, VectorXd p,
                 VectorXd p_h, const VectorXd& d, double delta, const VectorXd& lb, const VectorXd& ub,
                 double theta) {
  if (in_bounds(x + p, lb, ub)) {
    const double pv = evaluate_quadratic(J_h, g_h, p_h, diag_h);
    return {p, p_h, -pv};
  }
  auto [p_stride, hits] = step_size_to_bound(x, p, lb, ub);

  VectorXd r_h = p_h;
  for (Eigen::Index j = 0; j < hits.size(); ++j)
    if (hits[j] != 0) r_h[j] = -r_h[j];
  VectorXd r = d.cwiseProduct(r_h);

  p *= p_stride;
  p_h *= p_stride;
  const VectorXd x_on_bound = x + p;

  const double to_tr = intersect_trust_region(p_h, r_h, delta).second;
  const double to_bound = step_size_to_bound(x_on_bound, r, lb, ub).first;

  double r_stride = std::min(to_bound, to_tr);
  double r_lo = 0.0;
  double r_hi = -1.0;
  if (r_stride > 0.0) {
    r_lo = (1.0 - theta) * p_stride / r_stride;
    r_hi = r_stride == to_bound ? theta * to_bound : to_tr;
  }
  double r_value = kInf;
  if (r_lo <= r_hi) {
    const Quadratic1D q = build_quadratic_1d(J_h, g_h, r_h, diag_h, &p_h);
    auto [t, val] = minimize_quadratic_1d(q, r_lo, r_hi);
    r_h = p_h + t * r_h;
    r = d.cwiseProduct(r_h);
    r_value = val;
  }

  p *= theta;
  p_h *= theta;
  const double p_value = evaluate_quadratic(J_h, g_h, p_h, diag_h);

  VectorXd ag_h = -g_h;
  VectorXd ag = d.cwiseProduct(ag_h);
  const double ag_to_tr = delta / ag_h.norm();
  const double ag_to_bound = step_size_to_bound(x, ag, lb, ub).first;
  const double ag_max = ag_to_bound < ag_to_tr ? theta * ag_to_bound : ag_to_tr;
  const Quadratic1D qa = build_quadratic_1d(J_h, g_h, ag_h, diag_h);
  auto [ag_stride, ag_value] = minimize_quadratic_1d(qa, 0.0, ag_max);
  ag_h *= ag_stride;
  ag *= ag_stride;

  if (p_value < r_value && p_value < ag_value) return {p, p_h, -p_value};
  if (r_value < p_value && r_value < ag_value) return {r, r_h, -r_value};
  return {ag, ag_h, -ag_value};
}

int check_termination(double dF, double F, double dx_norm, double x_norm, double ratio, double ftol,
                      double xtol) {
  const bool f_ok = dF < ftol * F && ratio > 0.25;
  const bool x_ok = dx_norm < xtol * (xtol + x_norm);
  if (f_ok && x_ok) return 4;
  if (f_ok) return 2;
  if (x_ok) return 3;
  return -1;
}

bool all_finite(const VectorXd& v) { return v.array().isFinite().all(); }

}  // namespace

MatrixXd forward_jacobian(const ResidualFn& fun, const VectorXd& x, const VectorXd& f0, const VectorXd& lb,
                          const VectorXd& ub, double rel_step, double abs_step, int* nfev) {
  MatrixXd J(f0.size(), x.size());
  VectorXd xp = x;
  VectorXd fp(f0.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    double h = std::max(abs_step, rel_step * std::abs(x[j]));
    if (x[j] + h > ub[j]) {
      if (x[j] - h >= lb[j]) h = -h;
      else h = (ub[j] - x[j] >= x[j] - lb[j]) ? (ub[j] - x[j]) : -(x[j] - lb[j]);
    }
    xp[j] = x[j] + h;
    const double dh = xp[j] - x[j];  // exactly representable step
    fun(xp, fp);
    if (nfev) ++*nfev;
    J.col(j) = (fp - f0) / dh;
    xp[j] = x[j];
  }
  return J;
}

LsqResult trf_solve(const ResidualFn& fun, const VectorXd& x0_in, const VectorXd& lb, const VectorXd& ub,
                    const LsqOptions& opt) {
  const Eigen::Index n = x0_in.size();
  if (lb.size() != n || ub.size() != n) fail(ErrorCode::invalid_argument, "bounds do not match x0");
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!(lb[j] < ub[j])) fail(ErrorCode::invalid_argument, "each lower bound must be below its upper bound");
    if (!(x0_in[j] >= lb[j] && x0_in[j] <= ub[j])) fail(ErrorCode::invalid_argument, "x0 lies outside the bounds");
  }
  const int max_nfev = opt.max_nfev > 0 ? opt.max_nfev : 20 * opt.max_iter;

  LsqResult res;
  VectorXd x = make_strictly_feasible(x0_in, lb, ub, 1e-10);
  VectorXd f;
  fun(x, f);
  res.nfev = 1;
  if (!all_finite(f)) fail(ErrorCode::non_finite, "residuals are not finite at the initial point");
  const Eigen::Index m = f.size();
  auto jac = [&](const VectorXd& xx, const VectorXd& ff) {
    ++res.njev;
    return forward_jacobian(fun, xx, ff, lb, ub, opt.diff_rel_step, opt.diff_abs_step, &res.nfev);
  };
  MatrixXd J = jac(x, f);
  double cost = 0.5 * f.squaredNorm();
  VectorXd g = J.transpose() * f;

  VectorXd v, dv;
  cl_scaling_vector(x, g, lb, ub, v, dv);
  double delta = (x.array() / v.array().sqrt()).matrix().norm();
  if (delta == 0.0) delta = 1.0;
  double g_norm = 0.0;

  double alpha = 0.0;
  int status = -1;
  int iteration = 0;
  VectorXd f_aug(m + n);
  MatrixXd J_aug(m + n, n);

  while (true) {
    cl_scaling_vector(x, g, lb, ub, v, dv);
    g_norm = g.cwiseProduct(v).lpNorm<Eigen::Infinity>();
    if (g_norm < opt.gtol) status = 1;
    if (status != -1 || res.nfev >= max_nfev || iteration >= opt.max_iter) break;

    const VectorXd d = v.array().sqrt();
    const VectorXd diag_h = g.cwiseProduct(dv);
    const VectorXd g_h = d.cwiseProduct(g);

    f_aug.head(m) = f;
    f_aug.tail(n).setZero();
    J_aug.topRows(m) = J * d.asDiagonal();
    J_aug.bottomRows(n) = diag_h.cwiseSqrt().asDiagonal();
    const MatrixXd J_h = J_aug.topRows(m);

    Eigen::JacobiSVD<MatrixXd> svd(J_aug, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const VectorXd s = svd.singularValues();
    const MatrixXd& V = svd.matrixV();
    const VectorXd uf = svd.matrixU().transpose() * f_aug;

    const double theta = std::max(0.995, 1.0 - g_norm);
    double actual_reduction = -1.0;
    VectorXd x_new = x;
    VectorXd f_new;
    double cost_new = cost;
    while (actual_reduction <= 0.0 && res.nfev < max_nfev) {
      TrSolution tr = solve_lsq_trust_region(n, m, uf, s, V, delta, alpha);
      alpha = tr.alpha;
      const VectorXd p_h = tr.p;
      const VectorXd p = d.cwiseProduct(p_h);
      Step st = select_step(x, J_h, diag_h, g_h, p, p_h, d, delta, lb, ub, theta);

      x_new = make_strictly_feasible(x + st.step, lb, ub, 0.0);
      fun(x_new, f_new);
      ++res.nfev;
      const double step_h_norm = st.step_h.norm();
      if (!all_finite(f_new)) {
        delta = 0.25 * step_h_norm;
        continue;
      }
      cost_new = 0.5 * f_new.squaredNorm();
      actual_reduction = cost - cost_new;
      auto [delta_new, ratio] =
          update_tr_radius(delta, actual_reduction, st.predicted_reduction, step_h_norm, step_h_norm > 0.95 * delta);
      status = check_termination(actual_reduction, cost, st.step.norm(), x.norm(), ratio, opt.ftol, opt.xtol);
      if (status != -1) break;
      alpha *= delta / delta_new;
      delta = delta_new;
    }
    if (actual_reduction > 0.0) {
      x = x_new;
      f = f_new;
      cost = cost_new;
      J = jac(x, f);
      g = J.transpose() * f;
    }
    ++iteration;
  }

  res.x = x;
  res.fun = f;
  res.jac = J;
  res.grad = g;
  res.cost = cost;
  res.optimality = g_norm;
  res.iterations = iteration;
  res.status = status == -1 ? LsqStatus::max_evaluations : static_cast<LsqStatus>(status);
  return res;
}

}  // namespace fomcell
