#include "fomcell/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "fomcell/error.hpp"

namespace fomcell {

RunReport evaluate(std::span<const double> pred, std::span<const double> meas) {
  if (pred.size() != meas.size()) {
    std::ostringstream os;
    os << "series lengths differ: " << pred.size() << " predicted vs " << meas.size() << " measured";
    fail(ErrorCode::invalid_argument, os.str());
  }
  if (pred.empty()) fail(ErrorCode::invalid_argument, "cannot evaluate empty series");
  RunReport r;
  r.samples = pred.size();
  double sq = 0.0;
  double ab = 0.0;
  for (std::size_t k = 0; k < pred.size(); ++k) {
    const double e = std::abs(pred[k] - meas[k]);
    sq += e * e;
    ab += e;
    r.max_abs_err = std::max(r.max_abs_err, e);
  }
  const double n = static_cast<double>(pred.size());
  r.rmse = std::sqrt(sq / n);
  r.mae = ab / n;
  // Rounding can push the means a hair above the maximum of equal errors.
  r.rmse = std::min(r.rmse, r.max_abs_err);
  r.mae = std::min(r.mae, r.max_abs_err);
  return r;
}

MethodRun run_caputo_instrumented(const DiscreteModel& dm, const CellState& init, std::span<const double> i) {
  const CellModel& m = dm.parent();
  const std::size_t n = m.branch_count();
  if (init.u.size() != n) fail(ErrorCode::invalid_argument, "initial state does not match the model");
  std::vector<HistoryBuffer> hist(n, HistoryBuffer(2));
  for (std::size_t j = 0; j < n; ++j) hist[j].push(init.u[j]);
  MethodRun run;
  run.v.reserve(i.size());
  double soc = init.soc;
  for (double ik : i) {
    const double ic = m.charging_current(ik);
    // Same summation order as observe(), so results match bit for bit.
    double v = m.ocv()(soc);
    for (std::size_t j = 0; j < n; ++j) v += hist[j].back(0);
    run.v.push_back(v + m.r0() * ic);
    for (std::size_t j = 0; j < n; ++j) hist[j].push(dm.a()[j] * hist[j].back(0) + dm.b()[j] * ic);
    soc += dm.b0() * ic;
  }
  for (const auto& h : hist) run.retained_states.push_back(h.peak_size());
  return run;
}

MethodRun run_gl_instrumented(const CellModel& m, int N, const CellState& init, std::span<const double> i,
                              double T) {
  const std::size_t n = m.branch_count();
  if (init.u.size() != n) fail(ErrorCode::invalid_argument, "initial state does not match the model");
  std::vector<GLBranchState> gl;
  gl.reserve(n);
  for (std::size_t j = 0; j < n; ++j) gl.push_back(gl_init(m.branches()[j], N, init.u[j]));
  MethodRun run;
  run.v.reserve(i.size());
  const double b0 = T / m.qn();
  double soc = init.soc;
  for (double ik : i) {
    const double ic = m.charging_current(ik);
    double v = m.ocv()(soc);
    for (std::size_t j = 0; j < n; ++j) v += gl[j].history.back(0);
    run.v.push_back(v + m.r0() * ic);
    for (std::size_t j = 0; j < n; ++j) gl_advance(m.branches()[j], gl[j], ic, T);
    soc += b0 * ic;
  }
  for (const auto& g : gl) run.retained_states.push_back(g.history.peak_size());
  return run;
}

namespace {

template <class F>
MethodRun timed(F&& f, std::size_t steps, int repeats) {
  MethodRun best;
  double best_time = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(1, repeats); ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    MethodRun run = f();
    const auto t1 = std::chrono::steady_clock::now();
    const double dt = std::chrono::duration<double>(t1 - t0).count();
    if (dt < best_time) {
      best_time = dt;
      best = std::move(run);
    }
  }
  best.runtime_per_step = steps ? best_time / static_cast<double>(steps) : 0.0;
  return best;
}

}  // namespace

BenchmarkReport benchmark(const CellModel& model, std::span<const double> t, std::span<const double> i, double T,
                          int N, double soc0, double tol, int repeats) {
  if (t.size() != i.size()) fail(ErrorCode::invalid_argument, "time and current series differ in length");
  if (i.empty()) fail(ErrorCode::invalid_argument, "benchmark needs a non-empty trace");
  check_uniform_sampling(t, T);
  const DiscreteModel dm = discretize(model, T, tol);
  const CellState init = rest_state(model, soc0);

  BenchmarkReport rep;
  rep.memory = N;
  rep.steps = i.size();
  rep.caputo = timed([&] { return run_caputo_instrumented(dm, init, i); }, i.size(), repeats);
  rep.gl = timed([&] { return run_gl_instrumented(model, N, init, i, T); }, i.size(), repeats);
  rep.difference = evaluate(rep.caputo.v, rep.gl.v);
  return rep;
}

}  // namespace fomcell
