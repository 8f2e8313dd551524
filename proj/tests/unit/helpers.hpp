#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "fomcell/ecm.hpp"
#include "fomcell/error.hpp"
#include "fomcell/synthgen.hpp"

namespace testutil {

inline double rel_err(double got, double want) {
  return want == 0.0 ? std::abs(got) : std::abs(got - want) / std::abs(want);
}

// 40.2 Ah cell with one fractional branch on the synthetic OCV curve.
inline fomcell::CellModel one_branch(double alpha = 0.7, double tau = 20.0, double R = 2e-3, double r0 = 1.2e-3) {
  return fomcell::CellModel(r0, {fomcell::FractionalBranch::from_tau(R, tau, alpha)}, 144720.0,
                            fomcell::synthetic_ocv());
}

inline fomcell::CellModel two_branch(double a1 = 0.7, double a2 = 0.9) {
  return fomcell::CellModel(1.2e-3,
                            {fomcell::FractionalBranch::from_tau(1e-3, 20.0, a1),
                             fomcell::FractionalBranch::from_tau(2e-3, 400.0, a2)},
                            144720.0, fomcell::synthetic_ocv());
}

// Code of the fomcell::Error thrown by f, or nullopt if f returns normally.
template <class F>
std::optional<fomcell::ErrorCode> error_code(F&& f) {
  try {
    f();
  } catch (const fomcell::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline std::vector<double> times(std::size_t n, double T = 1.0) {
  std::vector<double> t(n);
  for (std::size_t k = 0; k < n; ++k) t[k] = static_cast<double>(k) * T;
  return t;
}

}  // namespace testutil
