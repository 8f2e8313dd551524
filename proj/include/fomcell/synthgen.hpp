#pragma once

// Synthetic ground-truth data from a known CellModel: HPPC protocols,
// constant-current runs and drive cycles, with optional voltage noise.

#include <cstdint>
#include <string>
#include <vector>

#include "fomcell/ecm.hpp"
#include "fomcell/glbaseline.hpp"

namespace fomcell {

enum class ProtocolKind { hppc, constant_current, drive_cycle };
enum class SimMethod { caputo, gl, analytic };

const char* to_string(ProtocolKind k) noexcept;
const char* to_string(SimMethod m) noexcept;
ProtocolKind protocol_kind_from_string(const std::string& s);
SimMethod sim_method_from_string(const std::string& s);

struct ProtocolSpec {
  ProtocolKind kind = ProtocolKind::hppc;
  double T = 1.0;
  double soc0 = 0.5;

  // hppc: optional transfer to each setpoint, rest, pulse, relaxation.
  double pulse_current = -40.0;     // A, signed in the model's convention
  double pulse_duration = 10.0;     // s
  double relax_duration = 300.0;    // s
  double initial_rest = 60.0;       // s
  double rest_before_pulse = 600.0; // s, after each SOC transfer
  double transfer_current = 0.0;    // A magnitude; 0 selects |pulse_current| / 4
  std::vector<double> soc_steps;

  // constant_current
  double current = 0.0;   // A
  double duration = 0.0;  // s

  // drive_cycle: template currents sampled at T; empty selects the bundled
  // urban-cycle surrogate with rms current cycle_rms.
  std::vector<double> cycle_current;
  std::size_t samples = 2000;
  double cycle_rms = 20.0;

  double noise_sigma = 0.0;  // V
  std::uint64_t seed = 0;
  SimMethod method = SimMethod::caputo;
  int gl_memory = kDefaultGlMemory;
  double ml_tol = kDefaultTolerance;
};

/// Throws Error(invalid_argument) for non-positive durations and Error(domain)
/// for SOC setpoints outside the model's OCV table.
void validate(const ProtocolSpec& spec, const CellModel& model);

struct GeneratedData {
  Trajectory truth;             // t, i, v_true, soc, u
  std::vector<double> v_noisy;  // v_true + noise
};

/// Current profile of the protocol. SOC transfers are sized from the charge
/// bookkeeping so each setpoint is reached with a whole number of samples.
std::vector<double> build_current_profile(const CellModel& model, const ProtocolSpec& spec);

/// Error(range) names the sample at which SOC leaves the OCV table.
GeneratedData generate(const CellModel& model, const ProtocolSpec& spec);

/// Urban drive-cycle surrogate: holds of 1-10 s in zero-mean pairs (+x, -x)
/// with x ~ N(0, rms^2) clipped at 3 rms, so the crest factor is about 3.
std::vector<double> urban_cycle_surrogate(std::size_t samples, double rms, std::uint64_t seed);

/// Smooth increasing OCV curve used by the synthetic datasets.
double synthetic_ocv_voltage(double soc);
OCVTable synthetic_ocv(std::size_t points = kOcvGridPoints);

}  // namespace fomcell
