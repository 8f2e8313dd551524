#include "fomcell/ecm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fomcell/error.hpp"
#include "trajectory.hpp"

namespace fomcell {

const char* to_string(CurrentSign s) noexcept {
  return s == CurrentSign::charge_positive ? "charge-positive" : "discharge-positive";
}

CurrentSign current_sign_from_string(const std::string& s) {
  if (s == "charge-positive" || s == "charge_positive") return CurrentSign::charge_positive;
  if (s == "discharge-positive" || s == "discharge_positive") return CurrentSign::discharge_positive;
  fail(ErrorCode::invalid_argument, "unknown current sign convention '" + s + "'");
}

void validate(const FractionalBranch& b) {
  if (!(b.R > 0.0) || !std::isfinite(b.R)) fail(ErrorCode::domain, "branch resistance must be positive");
  if (!(b.C > 0.0) || !std::isfinite(b.C)) fail(ErrorCode::domain, "branch capacitance must be positive");
  if (!(b.alpha > 0.0 && b.alpha <= 1.0)) fail(ErrorCode::domain, "branch order alpha must lie in (0, 1]");
}

CellModel::CellModel(double r0, std::vector<FractionalBranch> branches, double qn, OCVTable ocv,
                     CurrentSign sign)
    : r0_(r0), branches_(std::move(branches)), qn_(qn), ocv_(std::move(ocv)), sign_(sign) {
  if (!(r0_ >= 0.0) || !std::isfinite(r0_)) fail(ErrorCode::domain, "R0 must be non-negative");
  if (!(qn_ > 0.0) || !std::isfinite(qn_)) fail(ErrorCode::domain, "nominal capacity Qn must be positive");
  if (branches_.empty()) fail(ErrorCode::domain, "a cell model needs at least one branch");
  if (ocv_.empty()) fail(ErrorCode::domain, "a cell model needs an OCV table");
  for (const auto& b : branches_) validate(b);
  std::stable_sort(branches_.begin(), branches_.end(),
                   [](const FractionalBranch& x, const FractionalBranch& y) { return x.tau() < y.tau(); });
  for (std::size_t j = 1; j < branches_.size(); ++j)
    if (!(branches_[j - 1].tau() < branches_[j].tau()))
      fail(ErrorCode::domain, "branch time constants must be distinct");
}

CellState rest_state(const CellModel& model, double soc) {
  return {soc, std::vector<double>(model.branch_count(), 0.0)};
}

namespace {

double branch_argument(const FractionalBranch& b, double t) { return -std::pow(t, b.alpha) / b.tau(); }

void check_zcut(double z, const char* where) {
  if (z < -kModelZCut) {
    std::ostringstream os;
    os << where << ": Mittag-Leffler argument " << z << " is below -" << kModelZCut
       << " (interval too long for the branch time constant)";
    fail(ErrorCode::domain, os.str());
  }
}

void check_state(const CellModel& m, const CellState& s) {
  if (s.u.size() != m.branch_count()) {
    std::ostringstream os;
    os << "state has " << s.u.size() << " branch voltages, model has " << m.branch_count();
    fail(ErrorCode::invalid_argument, os.str());
  }
}

}  // namespace

DiscreteModel::DiscreteModel(std::shared_ptr<const CellModel> parent, double T, double tol)
    : parent_(std::move(parent)), T_(T), tol_(tol) {
  if (!parent_) fail(ErrorCode::invalid_argument, "discretize: null model");
  if (!(T_ > 0.0) || !std::isfinite(T_)) fail(ErrorCode::domain, "sampling period must be positive");
  a_.reserve(parent_->branch_count());
  b_.reserve(parent_->branch_count());
  for (const auto& br : parent_->branches()) {
    const double z = branch_argument(br, T_);
    check_zcut(z, "discretize");
    const double a = ml_one(br.alpha, z, tol_).value;
    a_.push_back(a);
    b_.push_back(br.R * (1.0 - a));
  }
  b0_ = T_ / parent_->qn();
}

double analytic_branch_response(const FractionalBranch& branch, double u0, double i0, double t, double tol) {
  validate(branch);
  if (!(t >= 0.0)) fail(ErrorCode::domain, "analytic_branch_response requires t >= 0");
  const double z = branch_argument(branch, t);
  check_zcut(z, "analytic_branch_response");
  const double e = ml_one(branch.alpha, z, tol).value;
  return u0 * e + i0 * branch.R * (1.0 - e);
}

DiscreteModel discretize(const CellModel& model, double T, double tol) {
  return DiscreteModel(std::make_shared<const CellModel>(model), T, tol);
}

DiscreteModel discretize(std::shared_ptr<const CellModel> model, double T, double tol) {
  return DiscreteModel(std::move(model), T, tol);
}

void advance(const DiscreteModel& dm, CellState& state, double i_k) {
  check_state(dm.parent(), state);
  const double ic = dm.parent().charging_current(i_k);
  state.soc += dm.b0() * ic;
  for (std::size_t j = 0; j < state.u.size(); ++j) state.u[j] = dm.a()[j] * state.u[j] + dm.b()[j] * ic;
}

CellState step(const DiscreteModel& dm, const CellState& state, double i_k) {
  CellState next = state;
  advance(dm, next, i_k);
  return next;
}

double observe(const CellModel& model, const CellState& state, double i_k) {
  check_state(model, state);
  double v = model.ocv()(state.soc);
  for (double u : state.u) v += u;
  return v + model.r0() * model.charging_current(i_k);
}

double observe(const DiscreteModel& dm, const CellState& state, double i_k) {
  return observe(dm.parent(), state, i_k);
}

void check_uniform_sampling(std::span<const double> t, double T) {
  for (std::size_t k = 1; k < t.size(); ++k) {
    const double dt = t[k] - t[k - 1];
    if (!(std::abs(dt - T) <= 1e-6 * T)) {
      std::ostringstream os;
      os.precision(12);
      os << "non-uniform sampling at sample " << k << ": interval " << dt << " s, expected " << T << " s";
      fail(ErrorCode::invalid_argument, os.str());
    }
  }
}

namespace detail {

Trajectory start_trajectory(std::span<const double> t, std::span<const double> i, std::size_t n) {
  if (t.size() != i.size()) fail(ErrorCode::invalid_argument, "time and current series differ in length");
  Trajectory tr;
  tr.t.assign(t.begin(), t.end());
  tr.i.assign(i.begin(), i.end());
  tr.v.reserve(t.size());
  tr.soc.reserve(t.size());
  tr.u.assign(n, {});
  for (auto& col : tr.u) col.reserve(t.size());
  return tr;
}

void record(Trajectory& tr, const CellModel& m, const CellState& x, double i_k, std::size_t k) {
  try {
    tr.v.push_back(observe(m, x, i_k));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::range) throw;
    std::ostringstream os;
    os << e.what() << " at sample " << k;
    fail(ErrorCode::range, os.str());
  }
  tr.soc.push_back(x.soc);
  for (std::size_t j = 0; j < x.u.size(); ++j) tr.u[j].push_back(x.u[j]);
}

}  // namespace detail

using detail::record;
using detail::start_trajectory;

Trajectory simulate_trace(const DiscreteModel& dm, const CellState& init, std::span<const double> t,
                          std::span<const double> i) {
  const CellModel& m = dm.parent();
  check_state(m, init);
  check_uniform_sampling(t, dm.T());
  Trajectory tr = start_trajectory(t, i, m.branch_count());
  CellState x = init;
  for (std::size_t k = 0; k < t.size(); ++k) {
    record(tr, m, x, i[k], k);
    advance(dm, x, i[k]);
  }
  tr.final_state = std::move(x);
  return tr;
}

Trajectory simulate_piecewise_analytic(const CellModel& m, const CellState& init, std::span<const double> t,
                                       std::span<const double> i, double T, double tol) {
  check_state(m, init);
  if (!(T > 0.0)) fail(ErrorCode::domain, "sampling period must be positive");
  check_uniform_sampling(t, T);
  Trajectory tr = start_trajectory(t, i, m.branch_count());
  const std::size_t n = m.branch_count();
  const double b0 = T / m.qn();

  std::vector<MittagLefflerSeries> ml;
  ml.reserve(n);
  for (const auto& br : m.branches()) ml.emplace_back(br.alpha, 1.0, tol);

  auto response = [&](std::size_t j, double u0, double ic, double elapsed) {
    const FractionalBranch& br = m.branches()[j];
    const double z = branch_argument(br, elapsed);
    check_zcut(z, "simulate_piecewise_analytic");
    const double e = ml[j](z).value;
    return u0 * e + ic * br.R * (1.0 - e);
  };

  CellState x = init;
  std::vector<double> u_start = init.u;  // state where the current interval began
  std::size_t start = 0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (k > 0 && i[k] != i[k - 1]) {
      start = k;
      u_start = x.u;
    }
    record(tr, m, x, i[k], k);
    // State at t_{k+1}: the current interval continues through it.
    const double ic = m.charging_current(i[k]);
    const double elapsed = static_cast<double>(k + 1 - start) * T;
    for (std::size_t j = 0; j < n; ++j) x.u[j] = response(j, u_start[j], ic, elapsed);
    x.soc += b0 * ic;
  }
  tr.final_state = std::move(x);
  return tr;
}

}  // namespace fomcell
