#include "fomcell/ocv.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fomcell/error.hpp"

namespace fomcell {

namespace {

bool strictly_increasing(std::span<const double> xs) {
  return std::adjacent_find(xs.begin(), xs.end(),
                            [](double a, double b) { return !(a < b); }) == xs.end();
}

bool monotone(std::span<const double> xs) {
  const bool up = std::adjacent_find(xs.begin(), xs.end(),
                                     [](double a, double b) { return a > b; }) == xs.end();
  const bool down = std::adjacent_find(xs.begin(), xs.end(),
                                       [](double a, double b) { return a < b; }) == xs.end();
  return up || down;
}

void check_curve(const SocVoltageCurve& c, const char* name) {
  if (c.soc.size() != c.v.size() || c.soc.size() < 2)
    fail(ErrorCode::domain, std::string(name) + " curve needs >= 2 (soc, v) pairs of equal length");
  if (!strictly_increasing(c.soc))
    fail(ErrorCode::domain, std::string(name) + " curve SOC must be strictly increasing");
  if (!monotone(c.v)) fail(ErrorCode::domain, std::string(name) + " curve voltage must be monotone in SOC");
}

}  // namespace

OCVTable::OCVTable(std::vector<double> soc, std::vector<double> v)
    : soc_(std::move(soc)), v_(std::move(v)) {
  if (soc_.size() != v_.size() || soc_.size() < 2)
    fail(ErrorCode::domain, "OCV table needs at least two (soc, v) points of equal length");
  if (!strictly_increasing(soc_)) fail(ErrorCode::domain, "OCV table SOC grid must be strictly increasing");
  if (soc_.front() < 0.0 || soc_.back() > 1.0)
    fail(ErrorCode::domain, "OCV table SOC grid must lie inside [0, 1]");
  if (!strictly_increasing(v_)) fail(ErrorCode::domain, "OCV must be strictly increasing in SOC");
  for (double x : v_)
    if (!std::isfinite(x)) fail(ErrorCode::domain, "OCV table contains a non-finite voltage");
}

double interp_linear(std::span<const double> xs, std::span<const double> ys, double x) {
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t hi = static_cast<std::size_t>(it - xs.begin());
  if (hi == 0) return ys.front();
  if (hi == xs.size()) return ys.back();
  const std::size_t lo = hi - 1;
  const double w = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return ys[lo] + w * (ys[hi] - ys[lo]);
}

double OCVTable::operator()(double soc) const {
  if (soc_.empty()) fail(ErrorCode::range, "OCV table is empty");
  if (!(soc >= soc_.front() && soc <= soc_.back())) {
    std::ostringstream os;
    os << "SOC " << soc << " outside OCV table range [" << soc_.front() << ", " << soc_.back() << "]";
    fail(ErrorCode::range, os.str());
  }
  return interp_linear(soc_, v_, soc);
}

double ocv_eval(const OCVTable& table, double soc) { return table(soc); }

OCVTable build_ocv(const SocVoltageCurve& charge, const SocVoltageCurve& discharge, int grid_points) {
  check_curve(charge, "charge");
  check_curve(discharge, "discharge");
  if (grid_points < 2) fail(ErrorCode::domain, "OCV grid needs at least two points");
  const double lo = std::max(charge.soc.front(), discharge.soc.front());
  const double hi = std::min(charge.soc.back(), discharge.soc.back());
  if (!(lo < hi)) fail(ErrorCode::domain, "charge and discharge curves do not overlap in SOC");

  std::vector<double> soc(static_cast<std::size_t>(grid_points));
  std::vector<double> v(soc.size());
  for (int j = 0; j < grid_points; ++j) {
    // Pin the end points so the grid covers [lo, hi] exactly.
    const double s = j == grid_points - 1 ? hi : lo + (hi - lo) * j / (grid_points - 1);
    soc[static_cast<std::size_t>(j)] = s;
    v[static_cast<std::size_t>(j)] =
        0.5 * (interp_linear(charge.soc, charge.v, s) + interp_linear(discharge.soc, discharge.v, s));
  }
  return OCVTable(std::move(soc), std::move(v));
}

}  // namespace fomcell
