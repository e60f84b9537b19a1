#include <doctest.h>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rydvmc/metrics.hpp"
#include "rydvmc/trace.hpp"

using namespace rydvmc;

namespace {

// Trace with iterations 1..n and the given energies; other fields inert.
EnergyTrace make_trace(const std::vector<double>& energies) {
  EnergyTrace trace;
  for (std::size_t i = 0; i < energies.size(); ++i) {
    TraceRow row;
    row.iteration = static_cast<long>(i) + 1;
    row.phase = Phase::kVmc;
    row.updates_so_far = row.iteration;
    row.loss = energies[i];
    row.energy_mean = energies[i];
    row.energy_std = 0.0;
    trace.push_back(row);
  }
  return trace;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("window-two running average of a short series") {
  const auto trace = make_trace({1.0, 2.0, 3.0});
  const auto smoothed = running_average(trace, 2);
  REQUIRE(smoothed.size() == 2);
  CHECK(smoothed[0].first == 1);
  CHECK(smoothed[0].second == doctest::Approx(1.5));
  CHECK(smoothed[1].first == 2);
  CHECK(smoothed[1].second == doctest::Approx(2.5));
}

TEST_CASE("running average of a constant series is that constant") {
  const auto trace = make_trace(std::vector<double>(60, -3.7));
  const auto smoothed = running_average(trace, 50);
  REQUIRE(smoothed.size() == 11);
  for (const auto& [iteration, value] : smoothed) {
    CHECK(value == doctest::Approx(-3.7).epsilon(1e-14));
  }
}

TEST_CASE("output length is trace length minus window plus one") {
  std::vector<double> values(73);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = std::sin(0.1 * static_cast<double>(i));
  const auto trace = make_trace(values);
  CHECK(running_average(trace, 10).size() == 64);
  CHECK(running_average(trace, 50).size() == 24);
}

TEST_CASE("the window is centered with offsets -w/2+1 .. +w/2") {
  // Values 0..54 with window 50: the first smoothed point sits at the row
  // with 24 predecessors and averages rows 0..49.
  std::vector<double> values(55);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = static_cast<double>(i);
  const auto trace = make_trace(values);
  const auto smoothed = running_average(trace, 50);
  REQUIRE(smoothed.size() == 6);
  CHECK(smoothed[0].first == trace[24].iteration);
  CHECK(smoothed[0].second == doctest::Approx(24.5));
  CHECK(smoothed[5].first == trace[29].iteration);
  CHECK(smoothed[5].second == doctest::Approx(29.5));
}

TEST_CASE("running average commutes with a constant shift") {
  std::vector<double> values(80);
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = std::cos(0.3 * static_cast<double>(i)) * 2.0;
  }
  auto shifted = values;
  for (auto& v : shifted) v += 5.25;
  const auto a = running_average(make_trace(values), 50);
  const auto b = running_average(make_trace(shifted), 50);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(b[i].second == doctest::Approx(a[i].second + 5.25).epsilon(1e-12));
  }
}

TEST_CASE("running average validates its inputs") {
  const auto trace = make_trace({1.0, 2.0, 3.0});
  CHECK_THROWS_AS(running_average(trace, 3), std::invalid_argument);   // odd
  CHECK_THROWS_AS(running_average(trace, 0), std::invalid_argument);
  CHECK_THROWS_AS(running_average(trace, -2), std::invalid_argument);
  CHECK_THROWS_AS(running_average(trace, 4), std::invalid_argument);   // longer than trace
  CHECK_THROWS_AS(running_average({}, 2), std::invalid_argument);
}

TEST_CASE("convergence time of a synthetic step series") {
  // Energies sit 0.02 per atom above the reference until row 149 (0-based),
  // then drop to it exactly. With window 50 the average first dips under
  // 0.015 per atom once 13 zeroed rows are inside the window: row 136,
  // iteration 137.
  const int n_atoms = 16;
  const double ref = -10.0;
  std::vector<double> values(300, ref + 0.02 * n_atoms);
  for (std::size_t i = 149; i < values.size(); ++i) values[i] = ref;
  const auto trace = make_trace(values);
  const auto t = convergence_time(trace, ref, n_atoms, 0.015, 50);
  REQUIRE(t.has_value());
  CHECK(*t == 137);
}

TEST_CASE("convergence time uses the default threshold and window") {
  const int n_atoms = 16;
  const double ref = -10.0;
  std::vector<double> values(300, ref + 0.02 * n_atoms);
  for (std::size_t i = 149; i < values.size(); ++i) values[i] = ref;
  const auto trace = make_trace(values);
  CHECK(convergence_time(trace, ref, n_atoms) == convergence_time(trace, ref, n_atoms, 0.015, 50));
}

TEST_CASE("a series that never converges returns no value") {
  const auto trace = make_trace(std::vector<double>(100, 5.0));
  CHECK_FALSE(convergence_time(trace, 0.0, 4, 0.015, 50).has_value());
}

TEST_CASE("a trace shorter than the window cannot certify convergence") {
  const auto trace = make_trace(std::vector<double>(20, 0.0));
  CHECK_FALSE(convergence_time(trace, 0.0, 4, 0.015, 50).has_value());
  CHECK_THROWS_AS(convergence_time({}, 0.0, 4, 0.015, 50), std::invalid_argument);
}

TEST_CASE("a looser threshold never converges later") {
  std::vector<double> values;
  for (int i = 0; i < 400; ++i) {
    values.push_back(2.0 * std::exp(-0.01 * i) + 0.01 * std::sin(0.7 * i));
  }
  const auto trace = make_trace(values);
  const auto tight = convergence_time(trace, 0.0, 4, 0.015, 50);
  const auto loose = convergence_time(trace, 0.0, 4, 0.03, 50);
  REQUIRE(tight.has_value());
  REQUIRE(loose.has_value());
  CHECK(*loose <= *tight);
}

TEST_CASE("smoothed convergence lags the first raw crossing by at most the window") {
  std::vector<double> values;
  for (int i = 0; i < 600; ++i) {
    values.push_back(1.5 * std::exp(-0.008 * i) + 0.02 * std::cos(1.3 * i));
  }
  const int n_atoms = 4;
  const double threshold = 0.015;
  const auto trace = make_trace(values);
  const auto t = convergence_time(trace, 0.0, n_atoms, threshold, 50);
  REQUIRE(t.has_value());
  long first_raw = -1;
  for (const auto& row : trace) {
    if (row.energy_mean / n_atoms <= threshold) {
      first_raw = row.iteration;
      break;
    }
  }
  REQUIRE(first_raw > 0);
  CHECK(*t >= first_raw - 50);
  CHECK(*t <= trace.back().iteration);
}

}  // TEST_SUITE
