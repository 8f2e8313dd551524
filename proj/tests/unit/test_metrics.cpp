#include <doctest.h>

#include "fomcell/metrics.hpp"
#include "helpers.hpp"

using namespace fomcell;
using testutil::error_code;

TEST_CASE("evaluate: identical series and constant offset") {
  const std::vector<double> a{3.6, 3.7, 3.8, 3.65};
  const RunReport z = evaluate(a, a);
  CHECK(z.rmse == 0.0);
  CHECK(z.mae == 0.0);
  CHECK(z.max_abs_err == 0.0);
  CHECK(z.samples == 4);
  std::vector<double> b = a;
  for (double& x : b) x += 0.013;
  const RunReport r = evaluate(a, b);
  CHECK(r.rmse == doctest::Approx(0.013).epsilon(1e-12));
  CHECK(r.mae == doctest::Approx(0.013).epsilon(1e-12));
  CHECK(r.max_abs_err == doctest::Approx(0.013).epsilon(1e-12));
  CHECK(r.rmse <= r.max_abs_err);
  CHECK(r.mae <= r.max_abs_err);
}

TEST_CASE("evaluate: definitions and errors") {
  const std::vector<double> p{1.0, 2.0, 3.0}, m{1.0, 2.5, 1.0};
  const RunReport r = evaluate(p, m);
  CHECK(r.rmse == doctest::Approx(std::sqrt((0.25 + 4.0) / 3.0)));
  CHECK(r.mae == doctest::Approx(2.5 / 3.0));
  CHECK(r.max_abs_err == 2.0);
  CHECK(error_code([&] { evaluate(p, std::vector<double>{1.0}); }) == ErrorCode::invalid_argument);
  CHECK(error_code([] { evaluate(std::vector<double>{}, std::vector<double>{}); }) == ErrorCode::invalid_argument);
}

TEST_CASE("instrumented runs reproduce the plain simulators") {
  const CellModel m = testutil::two_branch();
  const auto i = urban_cycle_surrogate(700, 25.0, 2);
  const auto t = testutil::times(i.size());
  const DiscreteModel dm = discretize(m, 1.0);
  const CellState init = rest_state(m, 0.5);
  CHECK(run_caputo_instrumented(dm, init, i).v == simulate_trace(dm, init, t, i).v);
  CHECK(run_gl_instrumented(m, 64, init, i, 1.0).v == gl_simulate_trace(m, 64, init, t, i, 1.0).v);
}

TEST_CASE("benchmark: measured retained states") {
  const CellModel m = testutil::two_branch();
  const auto i = urban_cycle_surrogate(1000, 20.0, 1);
  const auto rep = benchmark(m, testutil::times(i.size()), i, 1.0, 64, 0.5, kDefaultTolerance, 1);
  CHECK(rep.caputo.retained_states == std::vector<std::size_t>{2, 2});
  CHECK(rep.gl.retained_states == std::vector<std::size_t>{64, 64});
  CHECK(rep.steps == 1000);
  CHECK(rep.caputo.runtime_per_step > 0.0);
  CHECK(rep.gl.runtime_per_step > 0.0);
  const auto short_mem = benchmark(m, testutil::times(i.size()), i, 1.0, 8, 0.5, kDefaultTolerance, 1);
  CHECK(short_mem.gl.retained_states == std::vector<std::size_t>{8, 8});
  // A trace shorter than N never fills the buffer.
  const std::vector<double> few(10, 5.0);
  const auto tiny = benchmark(m, testutil::times(10), few, 1.0, 64, 0.5, kDefaultTolerance, 1);
  CHECK(tiny.gl.retained_states == std::vector<std::size_t>{11, 11});
}

TEST_CASE("benchmark: integer-order methods agree below 0.1 mV") {
  const CellModel m(1.2e-3, {FractionalBranch::from_tau(2e-3, 200.0, 1.0)}, 144720.0, synthetic_ocv());
  const auto i = urban_cycle_surrogate(1000, 20.0, 6);
  const auto rep = benchmark(m, testutil::times(i.size()), i, 1.0, 64, 0.5, kDefaultTolerance, 1);
  CHECK(rep.difference.rmse < 1e-4);
}
