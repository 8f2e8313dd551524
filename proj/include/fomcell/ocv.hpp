#pragma once

#include <span>
#include <vector>

namespace fomcell {

/// Open-circuit voltage as a function of state of charge, tabulated on a
/// strictly increasing SOC grid with strictly increasing voltages and
/// evaluated by piecewise-linear interpolation.
class OCVTable {
 public:
  OCVTable() = default;
  /// Throws Error(domain) unless both grids have >= 2 equal-length points,
  /// soc is strictly increasing inside [0, 1] and v is strictly increasing.
  OCVTable(std::vector<double> soc, std::vector<double> v);

  /// Error(range) outside [soc_min(), soc_max()]; no extrapolation.
  double operator()(double soc) const;

  double soc_min() const { return soc_.front(); }
  double soc_max() const { return soc_.back(); }
  bool contains(double soc) const { return soc >= soc_.front() && soc <= soc_.back(); }
  bool empty() const { return soc_.empty(); }

  const std::vector<double>& soc_grid() const noexcept { return soc_; }
  const std::vector<double>& v_grid() const noexcept { return v_; }

 private:
  std::vector<double> soc_;
  std::vector<double> v_;
};

inline constexpr int kOcvGridPoints = 201;

/// A measured (soc, v) curve, e.g. a 0.05C charge or discharge.
struct SocVoltageCurve {
  std::vector<double> soc;
  std::vector<double> v;
};

/// Averages a slow-charge and a slow-discharge curve pointwise after
/// resampling both onto a uniform grid over their common SOC range.
OCVTable build_ocv(const SocVoltageCurve& charge, const SocVoltageCurve& discharge,
                   int grid_points = kOcvGridPoints);

double ocv_eval(const OCVTable& table, double soc);

/// Linear interpolation helper shared with build_ocv; xs strictly increasing.
double interp_linear(std::span<const double> xs, std::span<const double> ys, double x);

}  // namespace fomcell
