#pragma once

// Grunwald-Letnikov short-memory discretization of the branch equation
// D^alpha U = -U/tau + I/C, the comparison baseline for the Caputo recursion:
//
//     U_{k+1} = T^alpha (-U_k/tau + I_k/C) - sum_{j=1}^{min(k+1,N)} w_j U_{k+1-j}
//
// with w_0 = 1, w_j = w_{j-1} (1 - (alpha+1)/j).

#include <cstddef>
#include <span>
#include <vector>

#include "fomcell/ecm.hpp"

namespace fomcell {

inline constexpr int kDefaultGlMemory = 64;

/// w_0..w_N. Error(domain) unless 0 < alpha <= 1 and N >= 1.
std::vector<double> gl_weights(double alpha, int N);

/// Fixed-capacity ring buffer of past samples. Counts element reads and
/// tracks the largest occupancy reached, so memory claims can be measured.
class HistoryBuffer {
 public:
  explicit HistoryBuffer(std::size_t capacity);

  /// Appends v, dropping the oldest sample once full.
  void push(double v) noexcept {
    head_ = head_ + 1 == data_.size() ? 0 : head_ + 1;
    data_[head_] = v;
    if (size_ < data_.size()) ++size_;
    if (size_ > peak_) peak_ = size_;
  }

  /// Sample `lag` steps back; lag 0 is the newest. Requires lag < size().
  double back(std::size_t lag) const noexcept {
    ++reads_;
    const std::size_t idx = head_ >= lag ? head_ - lag : head_ + data_.size() - lag;
    return data_[idx];
  }

  std::size_t size() const noexcept { return size_; }
  std::size_t capacity() const noexcept { return data_.size(); }
  std::size_t peak_size() const noexcept { return peak_; }
  std::size_t reads() const noexcept { return reads_; }
  void reset_reads() noexcept { reads_ = 0; }

 private:
  std::vector<double> data_;
  std::size_t head_;
  std::size_t size_ = 0;
  std::size_t peak_ = 0;
  mutable std::size_t reads_ = 0;
};

struct GLBranchState {
  HistoryBuffer history;        // U_k, U_{k-1}, ... newest first, at most N
  std::vector<double> weights;  // w_0..w_N
  int N = kDefaultGlMemory;
};

/// History holds U_0 = u0 with all earlier samples taken as zero.
GLBranchState gl_init(const FractionalBranch& branch, int N, double u0 = 0.0);

/// Pure step: returns the advanced state and U_{k+1}. i_k is charge-positive.
std::pair<GLBranchState, double> gl_step(const FractionalBranch& branch, const GLBranchState& st, double i_k,
                                         double T);

/// In-place step used by simulation loops; returns U_{k+1}.
double gl_advance(const FractionalBranch& branch, GLBranchState& st, double i_k, double T);

struct GLRunStats {
  std::vector<std::size_t> peak_history;  // per branch
};

/// Same row semantics and output schema as simulate_trace.
Trajectory gl_simulate_trace(const CellModel& model, int N, const CellState& init, std::span<const double> t,
                             std::span<const double> i, double T, GLRunStats* stats = nullptr);

}  // namespace fomcell
