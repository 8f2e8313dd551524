#include "fomcell/glbaseline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fomcell/error.hpp"
#include "trajectory.hpp"

namespace fomcell {

std::vector<double> gl_weights(double alpha, int N) {
  if (!(alpha > 0.0 && alpha <= 1.0)) fail(ErrorCode::domain, "G-L order alpha must lie in (0, 1]");
  if (N < 1) fail(ErrorCode::domain, "G-L memory length N must be at least 1");
  std::vector<double> w(static_cast<std::size_t>(N) + 1);
  w[0] = 1.0;
  for (int j = 1; j <= N; ++j) w[j] = w[j - 1] * (1.0 - (alpha + 1.0) / j);
  return w;
}

HistoryBuffer::HistoryBuffer(std::size_t capacity) : data_(capacity, 0.0), head_(capacity - 1) {
  if (capacity == 0) fail(ErrorCode::invalid_argument, "history buffer capacity must be positive");
}

GLBranchState gl_init(const FractionalBranch& branch, int N, double u0) {
  validate(branch);
  GLBranchState st{HistoryBuffer(static_cast<std::size_t>(std::max(N, 1))), gl_weights(branch.alpha, N), N};
  st.history.push(u0);
  return st;
}

double gl_advance(const FractionalBranch& branch, GLBranchState& st, double i_k, double T) {
  if (st.weights.size() != static_cast<std::size_t>(st.N) + 1 || st.history.capacity() != static_cast<std::size_t>(st.N))
    fail(ErrorCode::invalid_argument, "G-L state is inconsistent with its memory length");
  const std::size_t m = st.history.size();  // min(k+1, N)
  const double uk = st.history.back(0);
  double acc = std::pow(T, branch.alpha) * (-uk / branch.tau() + i_k / branch.C) - st.weights[1] * uk;
  for (std::size_t j = 2; j <= m; ++j) acc -= st.weights[j] * st.history.back(j - 1);
  st.history.push(acc);
  return acc;
}

std::pair<GLBranchState, double> gl_step(const FractionalBranch& branch, const GLBranchState& st, double i_k,
                                         double T) {
  GLBranchState next = st;
  const double u = gl_advance(branch, next, i_k, T);
  return {std::move(next), u};
}

Trajectory gl_simulate_trace(const CellModel& model, int N, const CellState& init, std::span<const double> t,
                             std::span<const double> i, double T, GLRunStats* stats) {
  if (init.u.size() != model.branch_count())
    fail(ErrorCode::invalid_argument, "initial state does not match the model's branch count");
  if (!(T > 0.0)) fail(ErrorCode::domain, "sampling period must be positive");
  check_uniform_sampling(t, T);
  const std::size_t n = model.branch_count();
  Trajectory tr = detail::start_trajectory(t, i, n);

  std::vector<GLBranchState> gl;
  gl.reserve(n);
  for (std::size_t j = 0; j < n; ++j) gl.push_back(gl_init(model.branches()[j], N, init.u[j]));

  const double b0 = T / model.qn();
  CellState x = init;
  for (std::size_t k = 0; k < t.size(); ++k) {
    detail::record(tr, model, x, i[k], k);
    const double ic = model.charging_current(i[k]);
    for (std::size_t j = 0; j < n; ++j) x.u[j] = gl_advance(model.branches()[j], gl[j], ic, T);
    x.soc += b0 * ic;
  }
  tr.final_state = std::move(x);
  if (stats) {
    stats->peak_history.clear();
    for (const auto& g : gl) stats->peak_history.push_back(g.history.peak_size());
  }
  return tr;
}

}  // namespace fomcell
