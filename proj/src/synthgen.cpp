#include "fomcell/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "fomcell/error.hpp"

namespace fomcell {

const char* to_string(ProtocolKind k) noexcept {
  switch (k) {
    case ProtocolKind::hppc: return "hppc";
    case ProtocolKind::constant_current: return "constant_current";
    case ProtocolKind::drive_cycle: return "drive_cycle";
  }
  return "unknown";
}

const char* to_string(SimMethod m) noexcept {
  switch (m) {
    case SimMethod::caputo: return "caputo";
    case SimMethod::gl: return "gl";
    case SimMethod::analytic: return "analytic";
  }
  return "unknown";
}

ProtocolKind protocol_kind_from_string(const std::string& s) {
  if (s == "hppc") return ProtocolKind::hppc;
  if (s == "constant_current" || s == "constant-current") return ProtocolKind::constant_current;
  if (s == "drive_cycle" || s == "drive-cycle") return ProtocolKind::drive_cycle;
  fail(ErrorCode::invalid_argument, "unknown protocol kind '" + s + "'");
}

SimMethod sim_method_from_string(const std::string& s) {
  if (s == "caputo") return SimMethod::caputo;
  if (s == "gl") return SimMethod::gl;
  if (s == "analytic") return SimMethod::analytic;
  fail(ErrorCode::invalid_argument, "unknown simulation method '" + s + "' (expected caputo, gl or analytic)");
}

void validate(const ProtocolSpec& spec, const CellModel& model) {
  auto positive = [](double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x)) fail(ErrorCode::invalid_argument, std::string(name) + " must be positive");
  };
  auto non_negative = [](double x, const char* name) {
    if (!(x >= 0.0) || !std::isfinite(x))
      fail(ErrorCode::invalid_argument, std::string(name) + " must be non-negative");
  };
  positive(spec.T, "sampling period T");
  const OCVTable& ocv = model.ocv();
  if (!ocv.contains(spec.soc0)) fail(ErrorCode::domain, "initial SOC lies outside the OCV table");
  if (!(spec.noise_sigma >= 0.0)) fail(ErrorCode::invalid_argument, "noise_sigma must be non-negative");
  switch (spec.kind) {
    case ProtocolKind::hppc:
      positive(spec.pulse_duration, "pulse_duration");
      positive(spec.relax_duration, "relax_duration");
      non_negative(spec.initial_rest, "initial_rest");
      non_negative(spec.rest_before_pulse, "rest_before_pulse");
      non_negative(spec.transfer_current, "transfer_current");
      if (spec.pulse_current == 0.0 || !std::isfinite(spec.pulse_current))
        fail(ErrorCode::invalid_argument, "pulse_current must be nonzero");
      if (spec.soc_steps.empty()) fail(ErrorCode::invalid_argument, "an HPPC protocol needs at least one SOC step");
      for (double s : spec.soc_steps)
        if (!ocv.contains(s)) {
          std::ostringstream os;
          os << "SOC step " << s << " lies outside the OCV table [" << ocv.soc_min() << ", " << ocv.soc_max() << "]";
          fail(ErrorCode::domain, os.str());
        }
      break;
    case ProtocolKind::constant_current:
      positive(spec.duration, "duration");
      break;
    case ProtocolKind::drive_cycle:
      if (spec.samples == 0) fail(ErrorCode::invalid_argument, "drive cycle needs samples > 0");
      if (spec.cycle_current.empty()) positive(spec.cycle_rms, "cycle_rms");
      break;
  }
  if (spec.method == SimMethod::gl && spec.gl_memory < 1)
    fail(ErrorCode::invalid_argument, "gl_memory must be at least 1");
}

namespace {

std::size_t samples_for(double duration, double T) {
  return static_cast<std::size_t>(std::llround(duration / T));
}

void append(std::vector<double>& i, std::size_t n, double value) { i.insert(i.end(), n, value); }

}  // namespace

std::vector<double> urban_cycle_surrogate(std::size_t samples, double rms, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> hold(1, 10);
  std::normal_distribution<double> amp(0.0, rms);
  std::vector<double> i;
  i.reserve(samples + 20);
  while (i.size() < samples) {
    const double x = std::clamp(amp(rng), -3.0 * rms, 3.0 * rms);
    const auto d = static_cast<std::size_t>(hold(rng));
    append(i, d, x);
    append(i, d, -x);
  }
  i.resize(samples);
  return i;
}

std::vector<double> build_current_profile(const CellModel& model, const ProtocolSpec& spec) {
  validate(spec, model);
  const double T = spec.T;
  std::vector<double> i;
  switch (spec.kind) {
    case ProtocolKind::constant_current:
      append(i, std::max<std::size_t>(1, samples_for(spec.duration, T)), spec.current);
      break;
    case ProtocolKind::drive_cycle:
      if (spec.cycle_current.empty()) {
        i = urban_cycle_surrogate(spec.samples, spec.cycle_rms, spec.seed);
      } else {
        i.reserve(spec.samples);
        for (std::size_t k = 0; k < spec.samples; ++k) i.push_back(spec.cycle_current[k % spec.cycle_current.size()]);
      }
      break;
    case ProtocolKind::hppc: {
      const double b0 = T / model.qn();
      const double i_tr = spec.transfer_current > 0.0 ? spec.transfer_current : std::abs(spec.pulse_current) / 4.0;
      double soc = spec.soc0;
      auto run = [&](std::size_t n, double current) {
        append(i, n, current);
        for (std::size_t k = 0; k < n; ++k) soc += b0 * model.charging_current(current);
      };
      run(samples_for(spec.initial_rest, T), 0.0);
      for (double target : spec.soc_steps) {
        const double dq = (target - soc) * model.qn();  // coulomb, charge-positive
        if (std::abs(target - soc) > 1e-12) {
          const double n_t = std::ceil(std::abs(dq) / (i_tr * T));
          const double ic = dq / (n_t * T);
          run(static_cast<std::size_t>(n_t), model.charging_current(ic));
          run(samples_for(spec.rest_before_pulse, T), 0.0);
        }
        run(std::max<std::size_t>(1, samples_for(spec.pulse_duration, T)), spec.pulse_current);
        run(std::max<std::size_t>(1, samples_for(spec.relax_duration, T)), 0.0);
      }
      break;
    }
  }
  return i;
}

GeneratedData generate(const CellModel& model, const ProtocolSpec& spec) {
  const std::vector<double> i = build_current_profile(model, spec);
  std::vector<double> t(i.size());
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = static_cast<double>(k) * spec.T;
  const CellState init = rest_state(model, spec.soc0);

  GeneratedData out;
  switch (spec.method) {
    case SimMethod::caputo:
      out.truth = simulate_trace(discretize(model, spec.T, spec.ml_tol), init, t, i);
      break;
    case SimMethod::gl:
      out.truth = gl_simulate_trace(model, spec.gl_memory, init, t, i, spec.T);
      break;
    case SimMethod::analytic:
      out.truth = simulate_piecewise_analytic(model, init, t, i, spec.T, spec.ml_tol);
      break;
  }
  out.v_noisy = out.truth.v;
  if (spec.noise_sigma > 0.0) {
    // A separate stream from the drive-cycle template keeps the two independent.
    std::mt19937_64 rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> noise(0.0, spec.noise_sigma);
    for (double& v : out.v_noisy) v += noise(rng);
  }
  return out;
}

double synthetic_ocv_voltage(double soc) {
  return 3.45 + soc * (0.75 + soc * (-0.45 + 0.45 * soc));
}

OCVTable synthetic_ocv(std::size_t points) {
  if (points < 2) fail(ErrorCode::invalid_argument, "synthetic OCV needs at least two points");
  std::vector<double> s(points);
  std::vector<double> v(points);
  for (std::size_t k = 0; k < points; ++k) {
    s[k] = k + 1 == points ? 1.0 : static_cast<double>(k) / static_cast<double>(points - 1);
    v[k] = synthetic_ocv_voltage(s[k]);
  }
  return OCVTable(std::move(s), std::move(v));
}

}  // namespace fomcell
