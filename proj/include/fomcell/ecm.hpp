#pragma once

// Fractional-order nRC equivalent-circuit cell model.
//
// Each polarization branch is a resistor R in parallel with a constant phase
// element (impedance 1 / (C s^alpha)); with tau = R C its voltage obeys the
// Caputo equation  D^alpha U = -U / tau + I / C.  For constant current over
// an interval of length t the response is closed form:
//
//     U(t) = U(0) E_alpha(-t^alpha / tau) + I R [1 - E_alpha(-t^alpha / tau)]
//
// Sampling it with a zero-order hold at period T gives the per-branch
// recursion U_{k+1} = a U_k + b I_k with a = E_alpha(-T^alpha/tau) and
// b = R (1 - a). The recursion restarts the initial-value problem every
// sample, so chained steps only approximate the multi-interval Caputo
// solution when alpha < 1.

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fomcell/mlfunc.hpp"
#include "fomcell/ocv.hpp"

namespace fomcell {

enum class CurrentSign {
  charge_positive,     // positive current charges the cell (default)
  discharge_positive,  // positive current discharges the cell
};

const char* to_string(CurrentSign s) noexcept;
CurrentSign current_sign_from_string(const std::string& s);

struct FractionalBranch {
  double R = 0.0;      // ohm
  double C = 0.0;      // CPE coefficient, F s^(alpha-1)
  double alpha = 1.0;  // order in (0, 1]

  double tau() const noexcept { return R * C; }

  static FractionalBranch from_tau(double R, double tau, double alpha) { return {R, tau / R, alpha}; }
};

/// Throws Error(domain) unless R > 0, C > 0 and 0 < alpha <= 1.
void validate(const FractionalBranch& b);

class CellModel {
 public:
  /// Branches are stored in canonical order (strictly increasing tau);
  /// duplicated time constants are rejected.
  CellModel(double r0, std::vector<FractionalBranch> branches, double qn, OCVTable ocv,
            CurrentSign sign = CurrentSign::charge_positive);

  double r0() const noexcept { return r0_; }
  const std::vector<FractionalBranch>& branches() const noexcept { return branches_; }
  std::size_t branch_count() const noexcept { return branches_.size(); }
  double qn() const noexcept { return qn_; }
  const OCVTable& ocv() const noexcept { return ocv_; }
  CurrentSign sign() const noexcept { return sign_; }

  /// Current in the charge-positive convention used by the equations.
  double charging_current(double i) const noexcept {
    return sign_ == CurrentSign::charge_positive ? i : -i;
  }

 private:
  double r0_;
  std::vector<FractionalBranch> branches_;
  double qn_;
  OCVTable ocv_;
  CurrentSign sign_;
};

struct CellState {
  double soc = 0.0;
  std::vector<double> u;  // branch polarization voltages, volt
};

CellState rest_state(const CellModel& model, double soc);

class DiscreteModel {
 public:
  DiscreteModel(std::shared_ptr<const CellModel> parent, double T, double tol);

  double T() const noexcept { return T_; }
  double tol() const noexcept { return tol_; }
  const std::vector<double>& a() const noexcept { return a_; }
  const std::vector<double>& b() const noexcept { return b_; }
  double b0() const noexcept { return b0_; }
  const CellModel& parent() const noexcept { return *parent_; }
  std::shared_ptr<const CellModel> parent_ptr() const noexcept { return parent_; }

 private:
  std::shared_ptr<const CellModel> parent_;
  double T_;
  double tol_;
  std::vector<double> a_;
  std::vector<double> b_;
  double b0_;
};

/// Closed-form branch voltage after t seconds of constant current i0
/// (charge-positive) starting from u0. Error(domain) if -t^alpha/tau falls
/// below -kModelZCut.
double analytic_branch_response(const FractionalBranch& branch, double u0, double i0, double t,
                                double tol = kDefaultTolerance);

DiscreteModel discretize(const CellModel& model, double T, double tol = kDefaultTolerance);
DiscreteModel discretize(std::shared_ptr<const CellModel> model, double T,
                         double tol = kDefaultTolerance);

CellState step(const DiscreteModel& dm, const CellState& state, double i_k);
/// In-place form of step for simulation loops.
void advance(const DiscreteModel& dm, CellState& state, double i_k);

/// Terminal voltage OCV(soc) + sum(u) + R0 i. Error(range) if soc leaves the
/// OCV table.
double observe(const DiscreteModel& dm, const CellState& state, double i_k);
double observe(const CellModel& model, const CellState& state, double i_k);

struct Trajectory {
  std::vector<double> t;
  std::vector<double> i;
  std::vector<double> v;
  std::vector<double> soc;
  std::vector<std::vector<double>> u;  // u[branch][sample]
  CellState final_state;               // state after the last sample's step
};

/// Throws Error(invalid_argument) unless every interval equals T within
/// 1e-6 T.
void check_uniform_sampling(std::span<const double> t, double T);

/// Row k holds observe(x_k, i_k) with x_0 = init and x_{k+1} = step(x_k, i_k).
Trajectory simulate_trace(const DiscreteModel& dm, const CellState& init, std::span<const double> t,
                          std::span<const double> i);

/// Reference simulation that evaluates the closed form at every sample,
/// restarting only where the current changes value. Shares SOC bookkeeping
/// with simulate_trace.
Trajectory simulate_piecewise_analytic(const CellModel& model, const CellState& init,
                                       std::span<const double> t, std::span<const double> i, double T,
                                       double tol = kDefaultTolerance);

}  // namespace fomcell
