#pragma once

// Mittag-Leffler functions E_a(z) and E_{a,b}(z) for real arguments.
//
// The primary evaluator is the truncated power series
//
//     E_{a,b}(z) ~= sum_{k=0}^{K} z^k / Gamma(k a + b)
//
// stopped at the first term with |term_k| < tol (the term is included).
// For z < 0 the alternating series cancels catastrophically once |z| grows;
// when the estimated rounding error of the sum exceeds tol, or the series
// fails to converge within max_terms, the evaluator switches to an
// integral representation (0 < a < 1) or to a binary128 series (a = 1).
// Battery-model arguments z = -T^a/tau are small and always take the series.

#include <cstdint>
#include <vector>

namespace fomcell {

inline constexpr double kDefaultTolerance = 1e-6;
inline constexpr int kDefaultMaxTerms = 200;
// Battery-model guard: arguments below -kModelZCut are rejected by ecm.
inline constexpr double kModelZCut = 30.0;

struct MLParams {
  double alpha = 1.0;
  double beta = 1.0;
  double z = 0.0;
  double tol = kDefaultTolerance;
  int max_terms = kDefaultMaxTerms;
};

enum class MLMethod : std::int32_t {
  series = 0,           // truncated power series, dynamic stopping rule
  integral = 1,         // Gorenflo-Loutchko-Luchko integral representation
  extended_series = 2,  // alpha == 1 series in binary128 arithmetic
};

const char* to_string(MLMethod m) noexcept;

struct MLResult {
  double value = 0.0;
  int terms_used = 0;
  bool converged = false;
  MLMethod method = MLMethod::series;
};

/// Throws Error(domain) unless 0 < alpha <= 1, beta > 0, tol > 0, max_terms >= 1.
void validate(const MLParams& p);

/// One-parameter function E_alpha(z); params.beta is ignored.
MLResult ml_one(const MLParams& params);
MLResult ml_one(double alpha, double z, double tol = kDefaultTolerance,
                int max_terms = kDefaultMaxTerms);

/// Two-parameter function E_{alpha,beta}(z).
MLResult ml_two(const MLParams& params);

/// The bare truncated series, with no fallback. Exposed for tests and for
/// callers that want the literal stopping rule; may lose accuracy for z << 0.
MLResult ml_series(const MLParams& params);

/// E_{alpha,alpha+1}(z) through (E_alpha(z) - 1) / z. Throws Error(domain)
/// for z == 0; the limit there is 1 / Gamma(alpha + 1).
double ml_two_from_one(double alpha, double z, double tol = kDefaultTolerance);

/// Gamma(x) for x > 0. Error(domain) for x <= 0 and Error(non_finite) when
/// the result overflows a double (x > ~171.62).
double gamma_fn(double x);

/// Series evaluator with the reciprocal Gamma values cached for a fixed
/// (alpha, beta). Used on hot paths that evaluate many z for one branch.
class MittagLefflerSeries {
 public:
  MittagLefflerSeries(double alpha, double beta = 1.0, double tol = kDefaultTolerance,
                      int max_terms = kDefaultMaxTerms);

  /// Same contract and result as ml_two({alpha, beta, z, tol, max_terms}).
  MLResult operator()(double z) const;

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double tol() const noexcept { return tol_; }

 private:
  double alpha_;
  double beta_;
  double tol_;
  int max_terms_;
  // 1/Gamma(k alpha + beta) for k < size(); shorter than max_terms when
  // Gamma overflows, which bounds how far the series may run.
  std::vector<double> inv_gamma_;
};

}  // namespace fomcell
