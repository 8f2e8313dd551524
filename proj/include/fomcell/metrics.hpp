#pragma once

// Error metrics between voltage series and the Caputo vs. G-L benchmark.

#include <cstddef>
#include <span>
#include <vector>

#include "fomcell/ecm.hpp"
#include "fomcell/glbaseline.hpp"

namespace fomcell {

struct RunReport {
  double rmse = 0.0;         // V
  double mae = 0.0;          // V
  double max_abs_err = 0.0;  // V
  double runtime_per_step = 0.0;     // s
  std::size_t peak_history_len = 0;  // states retained per branch
  std::size_t samples = 0;
};

/// Error(invalid_argument) unless the series have equal, non-zero length.
RunReport evaluate(std::span<const double> pred, std::span<const double> meas);

struct MethodRun {
  std::vector<double> v;
  std::vector<std::size_t> retained_states;  // per branch, measured peak occupancy
  double runtime_per_step = 0.0;             // s, best of the repeats
};

struct BenchmarkReport {
  MethodRun caputo;
  MethodRun gl;
  int memory = kDefaultGlMemory;
  std::size_t steps = 0;
  RunReport difference;  // caputo vs. gl voltages
};

/// Caputo recursion with a two-slot history buffer per branch (current and
/// next state); voltages equal simulate_trace on the same input.
MethodRun run_caputo_instrumented(const DiscreteModel& dm, const CellState& init, std::span<const double> i);

/// G-L recurrence with an N-slot history buffer per branch; voltages equal
/// gl_simulate_trace on the same input.
MethodRun run_gl_instrumented(const CellModel& model, int N, const CellState& init, std::span<const double> i,
                              double T);

/// Runs both methods on the same trace, timing each `repeats` times.
BenchmarkReport benchmark(const CellModel& model, std::span<const double> t, std::span<const double> i, double T,
                          int N = kDefaultGlMemory, double soc0 = 0.5, double tol = kDefaultTolerance,
                          int repeats = 5);

}  // namespace fomcell
