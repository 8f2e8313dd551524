#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fomcell/synthgen.hpp"
#include "helpers.hpp"

using namespace fomcell;
using testutil::error_code;

TEST_CASE("noise-free data equals the truth") {
  const CellModel m = testutil::one_branch();
  ProtocolSpec p;
  p.kind = ProtocolKind::drive_cycle;
  p.samples = 500;
  const auto g = generate(m, p);
  CHECK(g.v_noisy == g.truth.v);
  CHECK(g.truth.v.size() == 500);
}

TEST_CASE("fixed seed is bit-identical; seeds differ") {
  const CellModel m = testutil::one_branch();
  ProtocolSpec p;
  p.kind = ProtocolKind::drive_cycle;
  p.samples = 800;
  p.noise_sigma = 1e-3;
  p.seed = 99;
  const auto a = generate(m, p);
  const auto b = generate(m, p);
  CHECK(a.v_noisy == b.v_noisy);
  CHECK(a.truth.i == b.truth.i);
  p.seed = 100;
  CHECK(generate(m, p).v_noisy != a.v_noisy);
}

TEST_CASE("noise statistics") {
  const CellModel m = testutil::one_branch();
  ProtocolSpec p;
  p.kind = ProtocolKind::constant_current;
  p.current = 0.0;
  p.duration = 20000;
  p.noise_sigma = 2e-3;
  const auto g = generate(m, p);
  std::vector<double> e(g.v_noisy.size());
  for (std::size_t k = 0; k < e.size(); ++k) e[k] = g.v_noisy[k] - g.truth.v[k];
  const double mean = std::accumulate(e.begin(), e.end(), 0.0) / e.size();
  double var = 0.0;
  for (double x : e) var += (x - mean) * (x - mean);
  var /= e.size() - 1;
  CHECK(std::abs(mean) < 5 * 2e-3 / std::sqrt(20000.0));
  CHECK(std::sqrt(var) == doctest::Approx(2e-3).epsilon(0.03));
}

TEST_CASE("constant current follows the closed form plus OCV drift") {
  const CellModel m = testutil::one_branch(0.6, 50.0);
  ProtocolSpec p;
  p.kind = ProtocolKind::constant_current;
  p.current = -30.0;
  p.duration = 600;
  p.soc0 = 0.7;
  p.method = SimMethod::analytic;
  p.ml_tol = 1e-12;
  const auto g = generate(m, p);
  const auto& br = m.branches()[0];
  for (std::size_t k = 0; k < g.truth.v.size(); k += 17) {
    const double soc = 0.7 - 30.0 * k / m.qn();
    const double u = analytic_branch_response(br, 0.0, -30.0, static_cast<double>(k), 1e-12);
    CHECK(g.truth.v[k] == doctest::Approx(m.ocv()(soc) + u - 30.0 * m.r0()).epsilon(1e-12));
  }
}

TEST_CASE("HPPC profile shape") {
  const CellModel m = testutil::one_branch();
  ProtocolSpec p;
  p.soc0 = 0.9;
  p.soc_steps = {0.9, 0.7};
  p.pulse_current = -40.0;
  p.pulse_duration = 10;
  p.relax_duration = 100;
  p.initial_rest = 20;
  p.rest_before_pulse = 50;
  const auto i = build_current_profile(m, p);
  // 20 rest, pulse at 0.9 (no transfer), 100 rest, transfer, 50 rest, pulse, 100 rest.
  CHECK(std::all_of(i.begin(), i.begin() + 20, [](double x) { return x == 0.0; }));
  CHECK(std::all_of(i.begin() + 20, i.begin() + 30, [](double x) { return x == -40.0; }));
  CHECK(i.back() == 0.0);
  double q = 0.0;
  for (double x : i) q += x;
  // Net charge: two pulses plus the transfer 0.9 - 400/Qn -> 0.7.
  const double transfer = (0.7 - (0.9 - 400.0 / m.qn())) * m.qn();
  CHECK(q == doctest::Approx(-800.0 + transfer).epsilon(1e-9));
  const double n_transfer = std::count_if(i.begin(), i.end(), [](double x) { return x != 0.0 && x != -40.0; });
  CHECK(n_transfer == std::ceil(std::abs(transfer) / 10.0));
}

TEST_CASE("protocol validation") {
  const CellModel m = testutil::one_branch();
  ProtocolSpec p;
  p.soc_steps = {0.5};
  p.pulse_duration = 0;
  CHECK(error_code([&] { validate(p, m); }) == ErrorCode::invalid_argument);
  p = {};
  CHECK(error_code([&] { validate(p, m); }) == ErrorCode::invalid_argument);  // no SOC steps
  p.soc_steps = {1.2};
  CHECK(error_code([&] { validate(p, m); }) == ErrorCode::domain);
  p.soc_steps = {0.5};
  p.noise_sigma = -1;
  CHECK(error_code([&] { validate(p, m); }) == ErrorCode::invalid_argument);
  p.noise_sigma = 0;
  p.method = SimMethod::gl;
  p.gl_memory = 0;
  CHECK(error_code([&] { validate(p, m); }) == ErrorCode::invalid_argument);
  CHECK(error_code([] { protocol_kind_from_string("fuds"); }) == ErrorCode::invalid_argument);
  CHECK(sim_method_from_string("analytic") == SimMethod::analytic);
}

TEST_CASE("SOC leaving the table aborts with the sample index") {
  const CellModel m(1e-3, {FractionalBranch::from_tau(1e-3, 20.0, 0.7)}, 3600.0, synthetic_ocv());
  ProtocolSpec p;
  p.kind = ProtocolKind::constant_current;
  p.current = -95.0;
  p.duration = 100;
  p.soc0 = 0.5;
  try {
    generate(m, p);
    FAIL("expected a range error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::range);
    CHECK(std::string(e.what()).find("sample 19") != std::string::npos);
  }
}

TEST_CASE("urban surrogate: zero mean, bounded crest factor, varied holds") {
  const auto i = urban_cycle_surrogate(20000, 20.0, 3);
  REQUIRE(i.size() == 20000);
  double sum = 0.0, sq = 0.0, peak = 0.0;
  for (double x : i) {
    sum += x;
    sq += x * x;
    peak = std::max(peak, std::abs(x));
  }
  const double rms = std::sqrt(sq / i.size());
  CHECK(std::abs(sum / i.size()) < 0.5);
  CHECK(rms == doctest::Approx(20.0).epsilon(0.1));
  CHECK(peak <= 60.0);
  CHECK(peak / rms > 2.5);
  CHECK(urban_cycle_surrogate(100, 20.0, 3) == std::vector<double>(i.begin(), i.begin() + 100));
}

TEST_CASE("drive cycle from a user template repeats it") {
  const CellModel m = testutil::one_branch();
  ProtocolSpec p;
  p.kind = ProtocolKind::drive_cycle;
  p.cycle_current = {1.0, -2.0, 3.0};
  p.samples = 7;
  CHECK(build_current_profile(m, p) == std::vector<double>{1, -2, 3, 1, -2, 3, 1});
}

TEST_CASE("simulation methods agree where they must") {
  const CellModel m = testutil::one_branch(1.0, 30.0);
  ProtocolSpec p;
  p.kind = ProtocolKind::drive_cycle;
  p.samples = 1000;
  const auto cap = generate(m, p);
  p.method = SimMethod::analytic;
  const auto an = generate(m, p);
  // Exponential dynamics have the semigroup property: restarting is exact.
  for (std::size_t k = 0; k < cap.truth.v.size(); ++k)
    CHECK(cap.truth.v[k] == doctest::Approx(an.truth.v[k]).epsilon(1e-9));
}

TEST_CASE("synthetic OCV table") {
  const OCVTable t = synthetic_ocv();
  CHECK(t.soc_grid().size() == 201);
  CHECK(t.soc_min() == 0.0);
  CHECK(t.soc_max() == 1.0);
  CHECK(t(0.0) == 3.45);
  CHECK(t(1.0) == doctest::Approx(4.2));
  CHECK(error_code([] { synthetic_ocv(1); }) == ErrorCode::invalid_argument);
}
