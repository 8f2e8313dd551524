#include "fomcell/mlfunc.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fomcell/error.hpp"

namespace fomcell {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kMinSignificance = 1e-3;
// Largest x with a finite Gamma(x) in double precision.
constexpr double kGammaMaxArg = 171.62437695630271;

std::string describe(const MLParams& p) {
  std::ostringstream os;
  os.precision(17);
  os << "(alpha=" << p.alpha << ", beta=" << p.beta << ", z=" << p.z << ", tol=" << p.tol
     << ", max_terms=" << p.max_terms << ")";
  return os.str();
}

// Neumaier's variant of compensated summation.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

struct SeriesOutcome {
  MLResult result;
  double rounding_bound = 0.0;
};

// inv_gamma(k) must return 1/Gamma(k alpha + beta) or throw Error(non_finite).
template <class InvGamma>
SeriesOutcome run_series(double z, double tol, int max_terms, InvGamma&& inv_gamma) {
  CompensatedSum acc;
  double abs_sum = 0.0;
  double zk = 1.0;
  for (int k = 0; k < max_terms; ++k) {
    const double term = zk * inv_gamma(k);
    if (!std::isfinite(term)) fail(ErrorCode::non_finite, "Mittag-Leffler series term overflowed");
    acc.add(term);
    abs_sum += std::abs(term);
    if (std::abs(term) < tol) {
      const double bound = (8.0 + k) * kEps * abs_sum;
      return {{acc.value(), k + 1, true, MLMethod::series}, bound};
    }
    zk *= z;
    if (!std::isfinite(zk)) fail(ErrorCode::non_finite, "Mittag-Leffler series power overflowed");
  }
  const double bound = (8.0 + max_terms) * kEps * abs_sum;
  return {{acc.value(), max_terms, false, MLMethod::series}, bound};
}

// Gorenflo, Loutchko & Luchko (2002) representation with contour radius 1,
// valid for 0 < alpha < 1 and |arg z| > alpha*pi, here z < 0:
//   E = int_1^inf K(chi) dchi + int_{-alpha pi}^{alpha pi} P(phi) dphi.
double ml_integral(double alpha, double beta, double z) {
  using std::numbers::pi;
  const double x = -z;
  const double c = (1.0 - beta) / alpha;
  const double s1 = std::sin(pi * (1.0 - beta));
  const double s2 = std::sin(pi * (1.0 - beta + alpha));
  const double ca = std::cos(alpha * pi);
  const double inv_alpha = 1.0 / alpha;

  auto kernel = [&](double chi) {
    if (!(chi > 0.0) || !std::isfinite(chi)) return 0.0;
    const double log_chi = std::log(chi);
    const double e = c * log_chi - std::exp(inv_alpha * log_chi);
    if (e < -745.0) return 0.0;
    const double num = chi * s1 + x * s2;
    const double den = chi * chi + 2.0 * chi * x * ca + x * x;
    return std::exp(e) * num / den / (alpha * pi);
  };

  auto arc = [&](double phi) {
    const double omega = std::sin(phi * inv_alpha) + phi * (1.0 + c);
    const std::complex<double> rot(std::cos(omega), std::sin(omega));
    const std::complex<double> den = std::polar(1.0, phi) + x;
    const double mag = std::exp(std::cos(phi * inv_alpha)) / (2.0 * alpha * pi);
    return mag * (rot / den).real();
  };

  constexpr double qtol = 1e-14;
  boost::math::quadrature::tanh_sinh<double> finite;
  boost::math::quadrature::exp_sinh<double> half_line;

  // For alpha > 1/2 the kernel peaks near chi = x |cos(alpha pi)|; splitting
  // there keeps both pieces smooth as alpha -> 1.
  const double peak = ca < 0.0 ? -ca * x : 0.0;
  double k_part = 0.0;
  if (peak > 1.0) {
    k_part = finite.integrate(kernel, 1.0, peak, qtol) +
             half_line.integrate(kernel, peak, std::numeric_limits<double>::infinity(), qtol);
  } else {
    k_part = half_line.integrate(kernel, 1.0, std::numeric_limits<double>::infinity(), qtol);
  }
  // The real part of the arc integrand is even in phi.
  const double p_part = 2.0 * finite.integrate(arc, 0.0, alpha * pi, qtol);
  const double v = k_part + p_part;
  if (!std::isfinite(v)) fail(ErrorCode::non_finite, "Mittag-Leffler integral did not evaluate");
  return v;
}

// alpha == 1: E_{1,beta}(z) with binary128 accumulation, so the cancellation
// of roughly e^{|z|} / e^{z} stays below double resolution for |z| <~ 60.
MLResult ml_extended(double beta, double z) {
  const __float128 zq = z;
  const __float128 b = beta;
  __float128 term = 1 / tgammaq(b);
  __float128 sum = term;
  int k = 0;
  constexpr int kMaxTerms = 100000;
  const __float128 rel = static_cast<__float128>(1e-12) * static_cast<__float128>(1e-12);
  for (; k < kMaxTerms; ++k) {
    term *= zq / (b + k);
    sum += term;
    if (k > std::abs(z) && fabsq(term) <= rel * fabsq(sum)) break;
  }
  const double v = static_cast<double>(sum);
  if (!std::isfinite(v)) fail(ErrorCode::non_finite, "Mittag-Leffler extended series overflowed");
  return {v, k + 2, k < kMaxTerms, MLMethod::extended_series};
}

double inv_gamma_direct(double alpha, double beta, int k) {
  const double arg = k * alpha + beta;
  return 1.0 / gamma_fn(arg);
}

MLResult finish(double alpha, double beta, double z, double tol, const SeriesOutcome& s) {
  if (z >= 0.0) return s.result;
  // Besides meeting tol, the series must keep its leading digits: near the
  // cut the sum is far below the largest term and its sign is otherwise noise.
  if (s.result.converged && s.rounding_bound <= tol &&
      s.rounding_bound <= kMinSignificance * std::abs(s.result.value))
    return s.result;
  if (alpha < 1.0) {
    const double v = ml_integral(alpha, beta, z);
    return {v, 0, true, MLMethod::integral};
  }
  return ml_extended(beta, z);
}

MLResult fallback_after_overflow(double alpha, double beta, double z) {
  if (alpha < 1.0) return {ml_integral(alpha, beta, z), 0, true, MLMethod::integral};
  return ml_extended(beta, z);
}

}  // namespace

const char* to_string(MLMethod m) noexcept {
  switch (m) {
    case MLMethod::series: return "series";
    case MLMethod::integral: return "integral";
    case MLMethod::extended_series: return "extended_series";
  }
  return "unknown";
}

void validate(const MLParams& p) {
  if (!(p.alpha > 0.0 && p.alpha <= 1.0))
    fail(ErrorCode::domain, "Mittag-Leffler order alpha must lie in (0, 1] " + describe(p));
  if (!(p.beta > 0.0) || !std::isfinite(p.beta))
    fail(ErrorCode::domain, "Mittag-Leffler beta must be positive " + describe(p));
  if (!(p.tol > 0.0) || !std::isfinite(p.tol))
    fail(ErrorCode::domain, "Mittag-Leffler tolerance must be positive " + describe(p));
  if (p.max_terms < 1) fail(ErrorCode::domain, "max_terms must be at least 1 " + describe(p));
  if (!std::isfinite(p.z)) fail(ErrorCode::domain, "Mittag-Leffler argument must be finite " + describe(p));
}

double gamma_fn(double x) {
  if (!(x > 0.0)) {
    std::ostringstream os;
    os << "gamma_fn requires x > 0, got " << x;
    fail(ErrorCode::domain, os.str());
  }
  if (x > kGammaMaxArg) {
    std::ostringstream os;
    os << "gamma_fn overflows for x = " << x;
    fail(ErrorCode::non_finite, os.str());
  }
  const double g = std::tgamma(x);
  if (!std::isfinite(g)) fail(ErrorCode::non_finite, "gamma_fn overflow");
  return g;
}

MLResult ml_series(const MLParams& p) {
  validate(p);
  return run_series(p.z, p.tol, p.max_terms,
                    [&](int k) { return inv_gamma_direct(p.alpha, p.beta, k); })
      .result;
}

MLResult ml_two(const MLParams& p) {
  validate(p);
  SeriesOutcome s;
  try {
    s = run_series(p.z, p.tol, p.max_terms,
                   [&](int k) { return inv_gamma_direct(p.alpha, p.beta, k); });
  } catch (const Error& e) {
    if (e.code() != ErrorCode::non_finite || p.z >= 0.0) throw;
    return fallback_after_overflow(p.alpha, p.beta, p.z);
  }
  return finish(p.alpha, p.beta, p.z, p.tol, s);
}

MLResult ml_one(const MLParams& params) {
  MLParams p = params;
  p.beta = 1.0;
  return ml_two(p);
}

MLResult ml_one(double alpha, double z, double tol, int max_terms) {
  return ml_two({alpha, 1.0, z, tol, max_terms});
}

double ml_two_from_one(double alpha, double z, double tol) {
  if (z == 0.0)
    fail(ErrorCode::domain, "ml_two_from_one is undefined at z = 0; use 1/Gamma(alpha+1)");
  const MLResult e = ml_one(alpha, z, tol);
  return (e.value - 1.0) / z;
}

MittagLefflerSeries::MittagLefflerSeries(double alpha, double beta, double tol, int max_terms)
    : alpha_(alpha), beta_(beta), tol_(tol), max_terms_(max_terms) {
  validate({alpha, beta, 0.0, tol, max_terms});
  inv_gamma_.reserve(static_cast<std::size_t>(max_terms));
  for (int k = 0; k < max_terms; ++k) {
    const double arg = k * alpha + beta;
    if (arg > kGammaMaxArg) break;
    inv_gamma_.push_back(1.0 / gamma_fn(arg));
  }
}

MLResult MittagLefflerSeries::operator()(double z) const {
  if (!std::isfinite(z)) fail(ErrorCode::domain, "Mittag-Leffler argument must be finite");
  SeriesOutcome s;
  try {
    s = run_series(z, tol_, max_terms_, [&](int k) {
      if (static_cast<std::size_t>(k) >= inv_gamma_.size())
        fail(ErrorCode::non_finite, "gamma_fn overflow in Mittag-Leffler series");
      return inv_gamma_[static_cast<std::size_t>(k)];
    });
  } catch (const Error& e) {
    if (e.code() != ErrorCode::non_finite || z >= 0.0) throw;
    return fallback_after_overflow(alpha_, beta_, z);
  }
  return finish(alpha_, beta_, z, tol_, s);
}

}  // namespace fomcell
