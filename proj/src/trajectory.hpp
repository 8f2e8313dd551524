#pragma once

// Shared trajectory bookkeeping for the Caputo and G-L simulators.

#include <span>

#include "fomcell/ecm.hpp"

namespace fomcell::detail {

Trajectory start_trajectory(std::span<const double> t, std::span<const double> i, std::size_t n);

// Appends observe(x, i_k) and the state columns; range errors name sample k.
void record(Trajectory& tr, const CellModel& m, const CellState& x, double i_k, std::size_t k);

}  // namespace fomcell::detail
