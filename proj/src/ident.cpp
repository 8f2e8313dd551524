#include "fomcell/ident.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <sstream>
#include <thread>

#include "fomcell/error.hpp"
#include "fomcell/mlfunc.hpp"
#include "fomcell/trf.hpp"

namespace fomcell {

namespace {

// Residuals are handed to the optimizer in millivolts so its absolute
// gradient tolerance is meaningful for cell-voltage data.
constexpr double kResidualScale = 1e3;

// E_alpha(-t^alpha / tau) for one branch; exact exponential at alpha = 1.
class BranchDecay {
 public:
  BranchDecay(double alpha, double tau, double tol) : alpha_(alpha), tau_(tau) {
    if (alpha_ != 1.0) ml_.emplace(alpha_, 1.0, tol);
  }
  double operator()(double t) const {
    if (t == 0.0) return 1.0;
    if (!ml_) return std::exp(-t / tau_);
    return (*ml_)(-std::pow(t, alpha_) / tau_).value;
  }

 private:
  double alpha_;
  double tau_;
  std::optional<MittagLefflerSeries> ml_;
};

double pre_pulse_polarization(const PulseSegment& seg, const OCVTable& ocv, int pre_window) {
  double v = seg.u_t1;
  if (pre_window > 1 && !seg.pre_v.empty()) {
    const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(pre_window), seg.pre_v.size());
    v = std::accumulate(seg.pre_v.end() - static_cast<std::ptrdiff_t>(w), seg.pre_v.end(), 0.0) /
        static_cast<double>(w);
  }
  return v - ocv(seg.soc_pre);
}

void predict_into(const PulseSegment& seg, const OCVTable& ocv, std::span<const BranchParams> params,
                  double offset, RelaxAmplitude amplitude, double tol, double u_pre, std::vector<double>& out) {
  const double current = seg.signed_current();
  const double base = ocv(seg.soc_j) + offset;
  out.assign(seg.relax_t.size(), base);
  double r_total = 0.0;
  for (const auto& p : params) r_total += p.R;
  for (const auto& p : params) {
    const BranchDecay decay(p.alpha, p.tau, tol);
    double amp = p.R;
    if (amplitude == RelaxAmplitude::pulse_aware) {
      const double ed = decay(seg.pulse_duration);
      amp = p.R * (1.0 - ed) + (p.R / r_total) * (u_pre / current) * ed;
    }
    const double scale = current * amp;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += scale * decay(seg.relax_t[k]);
  }
}

}  // namespace

void validate(const PulseSegment& seg) {
  if (seg.relax_t.size() != seg.relax_v.size())
    fail(ErrorCode::invalid_argument, "relaxation time and voltage series differ in length");
  if (seg.relax_t.empty()) fail(ErrorCode::invalid_argument, "relaxation series is empty");
  if (seg.relax_t.front() != 0.0) fail(ErrorCode::invalid_argument, "relaxation timestamps must start at 0");
  for (std::size_t k = 1; k < seg.relax_t.size(); ++k)
    if (!(seg.relax_t[k] > seg.relax_t[k - 1]))
      fail(ErrorCode::invalid_argument, "relaxation timestamps must be strictly increasing");
  if (seg.direction != 1 && seg.direction != -1)
    fail(ErrorCode::invalid_argument, "pulse direction must be +1 or -1");
}

double extract_r0(const PulseSegment& seg) {
  if (!(seg.i_pulse > 0.0)) fail(ErrorCode::domain, "extract_r0 requires a positive pulse current magnitude");
  return (seg.u_t2 - seg.u_t1 + seg.u_t3 - seg.u_t4) / (2.0 * seg.signed_current());
}

double relax_model(std::span<const BranchParams> params, const OCVTable& ocv, double soc_j, double current,
                   double t, double tol) {
  if (!(t >= 0.0)) fail(ErrorCode::domain, "relax_model requires t >= 0");
  double v = ocv(soc_j);
  for (const auto& p : params) v += current * p.R * BranchDecay(p.alpha, p.tau, tol)(t);
  return v;
}

const char* to_string(RelaxAmplitude a) noexcept {
  return a == RelaxAmplitude::pulse_aware ? "pulse-aware" : "saturated";
}

RelaxAmplitude relax_amplitude_from_string(const std::string& s) {
  if (s == "pulse-aware" || s == "pulse_aware") return RelaxAmplitude::pulse_aware;
  if (s == "saturated") return RelaxAmplitude::saturated;
  fail(ErrorCode::invalid_argument, "unknown relaxation amplitude model '" + s + "'");
}

void validate(const FitConfig& cfg) {
  if (cfg.n_branches < 1) fail(ErrorCode::invalid_argument, "n_branches must be at least 1");
  auto check = [](const ParamBounds& b, const char* name) {
    if (!(b.lower < b.upper)) fail(ErrorCode::invalid_argument, std::string(name) + " bounds need lower < upper");
  };
  check(cfg.R, "R");
  check(cfg.tau, "tau");
  check(cfg.alpha, "alpha");
  if (!(cfg.R.lower > 0.0)) fail(ErrorCode::invalid_argument, "R lower bound must be positive");
  if (!(cfg.tau.lower > 0.0)) fail(ErrorCode::invalid_argument, "tau lower bound must be positive");
  if (!(cfg.alpha.lower > 0.0 && cfg.alpha.upper <= 1.0))
    fail(ErrorCode::invalid_argument, "alpha bounds must lie within (0, 1]");
  if (cfg.alpha_fixed && !(*cfg.alpha_fixed > 0.0 && *cfg.alpha_fixed <= 1.0))
    fail(ErrorCode::invalid_argument, "fixed alpha must lie in (0, 1]");
  if (!cfg.init.empty() && cfg.init.size() != static_cast<std::size_t>(cfg.n_branches))
    fail(ErrorCode::invalid_argument, "initial guess must list one entry per branch");
  if (cfg.max_iter < 1) fail(ErrorCode::invalid_argument, "max_iter must be positive");
  if (!(cfg.ml_tol > 0.0)) fail(ErrorCode::invalid_argument, "ml_tol must be positive");
  if (cfg.pre_window < 1) fail(ErrorCode::invalid_argument, "pre_window must be at least 1");
}

std::vector<double> predict_relaxation(const PulseSegment& seg, const OCVTable& ocv,
                                       std::span<const BranchParams> params, double offset, RelaxAmplitude amplitude,
                                       double tol, int pre_window) {
  validate(seg);
  std::vector<double> out;
  predict_into(seg, ocv, params, offset, amplitude, tol, pre_pulse_polarization(seg, ocv, pre_window), out);
  return out;
}

RelaxationProblem::RelaxationProblem(const PulseSegment& seg, const OCVTable& ocv, const FitConfig& cfg)
    : seg_(&seg), ocv_(&ocv), cfg_(cfg) {
  validate(cfg_);
  validate(seg);
  per_branch_ = cfg_.alpha_fixed ? 2 : 3;
  dim_ = per_branch_ * static_cast<std::size_t>(cfg_.n_branches) + (cfg_.fit_offset ? 1 : 0);
}

std::vector<double> RelaxationProblem::to_internal(std::span<const BranchParams> params, double offset) const {
  std::vector<double> x;
  x.reserve(dim_);
  for (const auto& p : params) {
    x.push_back(std::log(p.R));
    x.push_back(std::log(p.tau));
    if (!cfg_.alpha_fixed) x.push_back(p.alpha);
  }
  if (cfg_.fit_offset) x.push_back(offset);
  return x;
}

std::vector<BranchParams> RelaxationProblem::to_params(std::span<const double> x) const {
  std::vector<BranchParams> out(static_cast<std::size_t>(cfg_.n_branches));
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double* p = x.data() + j * per_branch_;
    out[j].R = std::exp(p[0]);
    out[j].tau = std::exp(p[1]);
    out[j].alpha = cfg_.alpha_fixed ? *cfg_.alpha_fixed : p[2];
  }
  return out;
}

double RelaxationProblem::offset_of(std::span<const double> x) const {
  return cfg_.fit_offset ? x[dim_ - 1] : 0.0;
}

std::vector<double> RelaxationProblem::lower() const {
  std::vector<double> lb;
  for (int j = 0; j < cfg_.n_branches; ++j) {
    lb.push_back(std::log(cfg_.R.lower));
    lb.push_back(std::log(cfg_.tau.lower));
    if (!cfg_.alpha_fixed) lb.push_back(cfg_.alpha.lower);
  }
  if (cfg_.fit_offset) lb.push_back(-std::numeric_limits<double>::infinity());
  return lb;
}

std::vector<double> RelaxationProblem::upper() const {
  std::vector<double> ub;
  for (int j = 0; j < cfg_.n_branches; ++j) {
    ub.push_back(std::log(cfg_.R.upper));
    ub.push_back(std::log(cfg_.tau.upper));
    if (!cfg_.alpha_fixed) ub.push_back(cfg_.alpha.upper);
  }
  if (cfg_.fit_offset) ub.push_back(std::numeric_limits<double>::infinity());
  return ub;
}

std::vector<double> RelaxationProblem::residuals(std::span<const double> x) const {
  const auto params = to_params(x);
  std::vector<double> r;
  predict_into(*seg_, *ocv_, params, offset_of(x), cfg_.amplitude, cfg_.ml_tol,
               pre_pulse_polarization(*seg_, *ocv_, cfg_.pre_window), r);
  for (std::size_t k = 0; k < r.size(); ++k) r[k] -= seg_->relax_v[k];
  return r;
}

namespace {

double clamp_inside(double v, const ParamBounds& b) {
  const double lo = b.lower + 1e-9 * (b.upper - b.lower);
  const double hi = b.upper - 1e-9 * (b.upper - b.lower);
  if (!std::isfinite(v)) return std::sqrt(b.lower * b.upper);
  return std::clamp(v, lo, hi);
}

std::vector<BranchParams> default_init(const PulseSegment& seg, const OCVTable& ocv, const FitConfig& cfg) {
  const int n = cfg.n_branches;
  const double t_relax = seg.relax_t.back();
  const double lo = t_relax / 50.0;
  std::vector<BranchParams> init(static_cast<std::size_t>(n));
  const double alpha0 = clamp_inside(cfg.alpha_fixed.value_or(0.8), cfg.alpha);
  for (int j = 0; j < n; ++j) {
    const double frac = n == 1 ? 0.5 : static_cast<double>(j) / (n - 1);
    init[j].tau = clamp_inside(lo * std::pow(50.0, frac), cfg.tau);
    init[j].alpha = cfg.alpha_fixed ? *cfg.alpha_fixed : alpha0;
  }
  const double current = seg.signed_current();
  const double a_total = (seg.relax_v.front() - ocv(seg.soc_j)) / current;
  double r_total = std::abs(a_total);
  if (cfg.amplitude == RelaxAmplitude::pulse_aware) {
    const double ed = BranchDecay(init[0].alpha, init[0].tau, cfg.ml_tol)(seg.pulse_duration);
    const double u_pre = pre_pulse_polarization(seg, ocv, cfg.pre_window);
    const double guess = (a_total - (u_pre / current) * ed) / (1.0 - ed);
    if (std::isfinite(guess) && guess > 0.0) r_total = guess;
  }
  for (auto& p : init) p.R = clamp_inside(r_total / n, cfg.R);
  return init;
}

}  // namespace

FitResult fit_relaxation(const PulseSegment& seg, const OCVTable& ocv, const FitConfig& cfg) {
  RelaxationProblem problem(seg, ocv, cfg);
  const std::size_t min_samples = 10 * 3 * static_cast<std::size_t>(cfg.n_branches);
  if (seg.relax_t.size() < min_samples) {
    std::ostringstream os;
    os << "relaxation has " << seg.relax_t.size() << " samples; a " << cfg.n_branches << "-branch fit needs at least "
       << min_samples;
    fail(ErrorCode::invalid_argument, os.str());
  }

  FitResult out;
  out.r0 = extract_r0(seg);
  out.t = seg.relax_t;

  std::vector<BranchParams> init = cfg.init.empty() ? default_init(seg, ocv, cfg) : cfg.init;
  for (auto& p : init) {
    p.R = clamp_inside(p.R, cfg.R);
    p.tau = clamp_inside(p.tau, cfg.tau);
    p.alpha = cfg.alpha_fixed ? *cfg.alpha_fixed : clamp_inside(p.alpha, cfg.alpha);
  }

  const auto [vmin, vmax] = std::minmax_element(seg.relax_v.begin(), seg.relax_v.end());
  const double span = *vmax - *vmin;
  std::vector<double> x_final = problem.to_internal(init, 0.0);
  if (!(span > 1e-7)) {
    out.degenerate = true;
    out.message = "flat relaxation: voltage varies by less than 0.1 uV; parameters are not identifiable";
  } else {
    const std::vector<double> x0 = problem.to_internal(init, 0.0);
    const std::vector<double> lbv = problem.lower();
    const std::vector<double> ubv = problem.upper();
    const Eigen::Map<const Eigen::VectorXd> lb(lbv.data(), static_cast<Eigen::Index>(lbv.size()));
    const Eigen::Map<const Eigen::VectorXd> ub(ubv.data(), static_cast<Eigen::Index>(ubv.size()));
    const Eigen::Map<const Eigen::VectorXd> x0v(x0.data(), static_cast<Eigen::Index>(x0.size()));

    ResidualFn fun = [&](const Eigen::VectorXd& x, Eigen::VectorXd& f) {
      const auto r = problem.residuals(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
      f.resize(static_cast<Eigen::Index>(r.size()));
      for (std::size_t k = 0; k < r.size(); ++k) f[static_cast<Eigen::Index>(k)] = kResidualScale * r[k];
    };
    LsqOptions opt;
    opt.ftol = cfg.cost_tol;
    opt.xtol = cfg.step_tol;
    opt.gtol = cfg.grad_tol;
    opt.max_iter = cfg.max_iter;
    const LsqResult lsq = trf_solve(fun, x0v, lb, ub, opt);
    x_final.assign(lsq.x.data(), lsq.x.data() + lsq.x.size());
    out.iterations = lsq.iterations;
    out.evaluations = lsq.nfev;
    out.converged = lsq.converged();
    switch (lsq.status) {
      case LsqStatus::gtol: out.message = "gradient tolerance reached"; break;
      case LsqStatus::ftol: out.message = "cost tolerance reached"; break;
      case LsqStatus::xtol: out.message = "step tolerance reached"; break;
      case LsqStatus::ftol_and_xtol: out.message = "cost and step tolerances reached"; break;
      case LsqStatus::max_evaluations: out.message = "iteration limit reached; best point returned"; break;
    }
  }

  out.params = problem.to_params(x_final);
  out.offset = problem.offset_of(x_final);
  std::sort(out.params.begin(), out.params.end(),
            [](const BranchParams& a, const BranchParams& b) { return a.tau < b.tau; });
  out.residuals = problem.residuals(x_final);
  double sq = 0.0;
  for (double r : out.residuals) sq += r * r;
  out.cost = sq / static_cast<double>(out.residuals.size());
  return out;
}

Segmentation segment_hppc(std::span<const double> t, std::span<const double> i, std::span<const double> v,
                          const SegmentationConfig& cfg) {
  const std::size_t n = t.size();
  if (i.size() != n || v.size() != n) fail(ErrorCode::invalid_argument, "trace columns differ in length");
  if (!(cfg.qn > 0.0)) fail(ErrorCode::invalid_argument, "segment_hppc needs the nominal capacity qn > 0");
  Segmentation out;
  if (n < 2) return out;
  const double T = t[1] - t[0];
  check_uniform_sampling(t, T);

  double max_abs = 0.0;
  for (double x : i) max_abs = std::max(max_abs, std::abs(x));
  if (max_abs == 0.0) return out;
  const double thr = cfg.threshold > 0.0 ? cfg.threshold : 0.5 * max_abs;
  const double rest = cfg.rest_level > 0.0 ? cfg.rest_level : 1e-9 * max_abs;
  auto charging = [&](double x) { return cfg.sign == CurrentSign::charge_positive ? x : -x; };

  // soc[k] is the SOC at sample k: soc0 plus the charge of samples before it.
  const double b0 = T / cfg.qn;
  std::vector<double> soc(n + 1);
  soc[0] = cfg.soc0;
  for (std::size_t k = 0; k < n; ++k) soc[k + 1] = soc[k] + b0 * charging(i[k]);

  std::size_t pulse = 0;
  std::size_t k = 0;
  while (k < n) {
    if (!(std::abs(i[k]) > thr)) {
      ++k;
      continue;
    }
    const std::size_t a = k;
    const bool positive = i[k] > 0.0;
    while (k < n && std::abs(i[k]) > thr && (i[k] > 0.0) == positive) ++k;
    const std::size_t b = k - 1;
    const std::size_t idx = pulse++;

    auto reject = [&](std::size_t sample, const std::string& msg) { out.rejected.push_back({idx, sample, msg}); };
    if (a == 0) {
      reject(a, "pulse starts at the first sample; no pre-pulse edge");
      continue;
    }
    if (b + 1 >= n) {
      reject(b, "pulse runs to the end of the trace; no relaxation");
      continue;
    }
    std::size_t e = b + 1;
    while (e < n && std::abs(i[e]) <= rest) ++e;
    const std::size_t relax_n = e - (b + 1);
    if (relax_n < cfg.min_relax_samples) {
      std::ostringstream os;
      os << "relaxation after the pulse has " << relax_n << " rest samples (need " << cfg.min_relax_samples
         << "); overlapping pulse or current step at sample " << e;
      reject(b + 1, os.str());
      continue;
    }

    PulseSegment seg;
    seg.k_t1 = a - 1;
    seg.k_t2 = a;
    seg.k_t3 = b;
    seg.k_t4 = b + 1;
    seg.u_t1 = v[a - 1];
    seg.u_t2 = v[a];
    seg.u_t3 = v[b];
    seg.u_t4 = v[b + 1];
    double sum_abs = 0.0;
    for (std::size_t m = a; m <= b; ++m) sum_abs += std::abs(i[m]);
    seg.i_pulse = sum_abs / static_cast<double>(b - a + 1);
    seg.direction = charging(i[a]) > 0.0 ? 1 : -1;
    seg.pulse_duration = static_cast<double>(b + 1 - a) * T;
    seg.soc_pre = soc[a - 1];
    seg.soc_j = soc[b + 1];
    std::size_t p0 = a - 1;
    while (p0 > 0 && (a - 1) - (p0 - 1) < cfg.pre_window && std::abs(i[p0 - 1]) <= rest) --p0;
    if (std::abs(i[a - 1]) <= rest) seg.pre_v.assign(v.begin() + static_cast<std::ptrdiff_t>(p0), v.begin() + static_cast<std::ptrdiff_t>(a));
    seg.relax_t.reserve(relax_n);
    seg.relax_v.reserve(relax_n);
    for (std::size_t m = b + 1; m < e; ++m) {
      seg.relax_t.push_back(static_cast<double>(m - (b + 1)) * T);
      seg.relax_v.push_back(v[m]);
    }
    out.segments.push_back(std::move(seg));
  }
  return out;
}

IdentifyResult identify(std::span<const double> t, std::span<const double> i, std::span<const double> v,
                        const OCVTable& ocv, const SegmentationConfig& seg_cfg, const FitConfig& fit_cfg,
                        unsigned threads) {
  validate(fit_cfg);
  Segmentation segs = segment_hppc(t, i, v, seg_cfg);
  IdentifyResult out;
  out.rejected = std::move(segs.rejected);
  const std::size_t n = segs.segments.size();
  std::vector<std::optional<FitResult>> fits(n);
  std::vector<std::string> errors(n);

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t j = next++; j < n; j = next++) {
      try {
        fits[j] = fit_relaxation(segs.segments[j], ocv, fit_cfg);
      } catch (const std::exception& e) {
        errors[j] = e.what();
      }
    }
  };
  const unsigned nthreads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (unsigned w = 0; w < nthreads; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (std::size_t j = 0; j < n; ++j) {
    if (fits[j]) {
      out.fits.push_back({j, std::move(segs.segments[j]), std::move(*fits[j])});
    } else {
      out.rejected.push_back({j, segs.segments[j].k_t4, "fit failed: " + errors[j]});
    }
  }
  return out;
}

CellModel model_from_fits(const IdentifyResult& r, const OCVTable& ocv, double qn, CurrentSign sign,
                          double soc_ref) {
  const SegmentFit* best = nullptr;
  for (const auto& f : r.fits) {
    if (f.fit.degenerate || f.fit.params.empty()) continue;
    if (!best || std::abs(f.segment.soc_j - soc_ref) < std::abs(best->segment.soc_j - soc_ref)) best = &f;
  }
  if (!best) fail(ErrorCode::domain, "no segment produced usable parameters");
  std::vector<FractionalBranch> branches;
  for (const auto& p : best->fit.params) branches.push_back(FractionalBranch::from_tau(p.R, p.tau, p.alpha));
  if (best->fit.r0 < 0.0) {
    std::ostringstream os;
    os << "segment " << best->index << " yields a negative R0 (" << best->fit.r0 << " ohm); check the current sign";
    fail(ErrorCode::domain, os.str());
  }
  return CellModel(best->fit.r0, std::move(branches), qn, ocv, sign);
}

}  // namespace fomcell
