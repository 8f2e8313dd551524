#pragma once

// HPPC parameter identification: ohmic resistance from the four pulse edge
// voltages, then fractional branch parameters from the relaxation tail by
// bound-constrained least squares (trust-region reflective).

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fomcell/ecm.hpp"
#include "fomcell/ocv.hpp"

namespace fomcell {

struct PulseSegment {
  double soc_j = 0.0;     // SOC during the relaxation (at T4)
  double soc_pre = 0.0;   // SOC at T1, before the pulse
  double i_pulse = 0.0;   // pulse current magnitude, > 0
  int direction = 1;      // +1 charging pulse, -1 discharging pulse
  double u_t1 = 0.0, u_t2 = 0.0, u_t3 = 0.0, u_t4 = 0.0;
  double pulse_duration = 0.0;  // s, from T2 to T4
  std::vector<double> pre_v;    // rest samples ending at T1, oldest first
  std::vector<double> relax_t;  // s from T4, starts at 0
  std::vector<double> relax_v;
  std::size_t k_t1 = 0, k_t2 = 0, k_t3 = 0, k_t4 = 0;  // sample indices

  /// Pulse current with sign, charge-positive.
  double signed_current() const noexcept { return direction * i_pulse; }
};

/// Throws Error(invalid_argument) if the relaxation series is malformed.
void validate(const PulseSegment& seg);

/// (u_t2 - u_t1 + u_t3 - u_t4) / (2 I) with I the signed pulse current.
/// Error(domain) if i_pulse <= 0. A negative result is returned as is.
double extract_r0(const PulseSegment& seg);

struct BranchParams {
  double R = 0.0;
  double tau = 0.0;
  double alpha = 1.0;
};

/// Saturated relaxation: OCV(soc_j) + current * sum R_i E_alpha_i(-t^alpha_i / tau_i),
/// current charge-positive. E_1 is evaluated as exp.
double relax_model(std::span<const BranchParams> params, const OCVTable& ocv, double soc_j, double current,
                   double t, double tol = kDefaultTolerance);

/// Relaxation amplitude per branch.
///  saturated:   A_i = R_i (assumes the pulse saturated, U_i(T4) = I R_i).
///  pulse_aware: A_i = R_i (1 - E_i(D)) + w_i (u_pre / I) E_i(D), the closed
///               form of U_i(T4) for a pulse of length D starting from u_pre.
enum class RelaxAmplitude { pulse_aware, saturated };

const char* to_string(RelaxAmplitude a) noexcept;
RelaxAmplitude relax_amplitude_from_string(const std::string& s);

struct ParamBounds {
  double lower = 0.0;
  double upper = 0.0;
};

struct FitConfig {
  int n_branches = 1;
  ParamBounds R{1e-5, 1e-1};
  ParamBounds tau{0.1, 1e4};
  ParamBounds alpha{0.3, 1.0};
  std::vector<BranchParams> init;      // empty: default initial guess
  std::optional<double> alpha_fixed;   // pins every alpha (1.0 for integer order)
  bool fit_offset = false;             // free constant added to OCV(soc_j)
  RelaxAmplitude amplitude = RelaxAmplitude::pulse_aware;
  int pre_window = 1;                  // rest samples averaged for u_pre
  int max_iter = 200;
  double cost_tol = 1e-12;             // relative cost reduction
  double step_tol = 1e-12;             // relative step
  double grad_tol = 1e-14;             // scaled gradient
  // Below 1e-10 the late relaxation samples leave the series for quadrature
  // with no gain in the fitted parameters.
  double ml_tol = 1e-10;
};

/// Throws Error(invalid_argument) on inconsistent settings.
void validate(const FitConfig& cfg);

struct FitResult {
  std::vector<BranchParams> params;  // increasing tau
  double r0 = 0.0;
  double offset = 0.0;
  double cost = 0.0;  // mean squared error, volt^2
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  bool degenerate = false;
  std::string message;
  std::vector<double> t;
  std::vector<double> residuals;  // model - measurement
};

/// Predicted relaxation voltages for the segment under the given amplitude
/// model. Exposed for tests and reports.
std::vector<double> predict_relaxation(const PulseSegment& seg, const OCVTable& ocv,
                                       std::span<const BranchParams> params, double offset, RelaxAmplitude amplitude,
                                       double tol = kDefaultTolerance, int pre_window = 1);

/// Relaxation residual function in the optimizer's coordinates
/// (log R, log tau[, alpha] per branch[, offset]); used by the fit and by
/// Jacobian checks.
class RelaxationProblem {
 public:
  RelaxationProblem(const PulseSegment& seg, const OCVTable& ocv, const FitConfig& cfg);

  std::size_t dimension() const noexcept { return dim_; }
  std::size_t residual_count() const noexcept { return seg_->relax_t.size(); }

  std::vector<double> to_internal(std::span<const BranchParams> params, double offset) const;
  std::vector<BranchParams> to_params(std::span<const double> x) const;
  double offset_of(std::span<const double> x) const;
  std::vector<double> lower() const;
  std::vector<double> upper() const;

  /// model - measurement at internal point x.
  std::vector<double> residuals(std::span<const double> x) const;

 private:
  const PulseSegment* seg_;
  const OCVTable* ocv_;
  FitConfig cfg_;
  std::size_t per_branch_;
  std::size_t dim_;
};

FitResult fit_relaxation(const PulseSegment& seg, const OCVTable& ocv, const FitConfig& cfg);

struct SegmentationConfig {
  double threshold = 0.0;   // A; 0 selects 0.5 max|i|
  double rest_level = 0.0;  // A; |i| <= rest_level counts as rest. 0 selects 1e-9 max|i|
  double soc0 = 0.5;
  double qn = 0.0;          // coulomb, > 0
  CurrentSign sign = CurrentSign::charge_positive;
  std::size_t min_relax_samples = 2;
  std::size_t pre_window = 10;  // rest samples kept before T1
};

struct SegmentIssue {
  std::size_t pulse_index = 0;
  std::size_t sample = 0;
  std::string message;
};

struct Segmentation {
  std::vector<PulseSegment> segments;
  std::vector<SegmentIssue> rejected;
};

/// Detects pulses as maximal same-sign runs with |i| > threshold. Edges are
/// the samples just outside and inside each run; the relaxation lasts from
/// T4 until the current leaves rest or the trace ends.
Segmentation segment_hppc(std::span<const double> t, std::span<const double> i, std::span<const double> v,
                          const SegmentationConfig& cfg);

struct SegmentFit {
  std::size_t index = 0;
  PulseSegment segment;
  FitResult fit;
};

struct IdentifyResult {
  std::vector<SegmentFit> fits;
  std::vector<SegmentIssue> rejected;
};

/// Segments the trace and fits every segment; segments are processed on up
/// to `threads` workers and returned in trace order.
IdentifyResult identify(std::span<const double> t, std::span<const double> i, std::span<const double> v,
                        const OCVTable& ocv, const SegmentationConfig& seg_cfg, const FitConfig& fit_cfg,
                        unsigned threads = 1);

/// Model from the fit nearest in SOC to soc_ref. Error(domain) if no fit
/// produced usable parameters.
CellModel model_from_fits(const IdentifyResult& r, const OCVTable& ocv, double qn, CurrentSign sign,
                          double soc_ref = 0.5);

}  // namespace fomcell
