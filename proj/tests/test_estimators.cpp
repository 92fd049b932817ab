#include <doctest.h>

#include <cmath>

#include "percolab/estimators.hpp"
#include "percolab/exact.hpp"

using namespace percolab;

TEST_CASE("normal quantile and Wilson interval") {
  CHECK(normal_quantile_two_sided(0.999) == doctest::Approx(3.2905267314919255).epsilon(1e-12));
  CHECK(normal_quantile_two_sided(0.95) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  // Closed form at z = 1.959963984540054, 30 of 100.
  const double z = 1.959963984540054, n = 100, ph = 0.3;
  const double centre = (ph + z * z / (2 * n)) / (1 + z * z / n);
  const double half = z * std::sqrt(ph * (1 - ph) / n + z * z / (4 * n * n)) / (1 + z * z / n);
  const auto ci = wilson_interval(30, 100, 0.95);
  CHECK(ci.lo == doctest::Approx(centre - half).epsilon(1e-12));
  CHECK(ci.hi == doctest::Approx(centre + half).epsilon(1e-12));
  CHECK(wilson_interval(0, 50, 0.999).lo == 0.0);
  CHECK(wilson_interval(0, 50, 0.999).hi > 0.0);
  CHECK(wilson_interval(50, 50, 0.999).hi == 1.0);
  CHECK_THROWS_AS((void)wilson_interval(3, 0, 0.9), std::invalid_argument);
  CHECK_THROWS_AS((void)wilson_interval(5, 3, 0.9), std::invalid_argument);
}

TEST_CASE("estimate_psi") {
  const auto z1 = LatticeSpec::hypercubic(1);
  const auto one = estimate_psi(z1, 0.4, 1, 100, 1);
  CHECK(one.point == 1.0);
  CHECK(one.lo == 1.0);
  CHECK(one.hi == 1.0);
  CHECK(estimate_psi(LatticeSpec::hypercubic(2), 0.0, 2, 1000, 1).point == 0.0);
  const auto half = estimate_psi(z1, 0.5, 2, 100000, 42);
  CHECK(half.lo <= 0.75);
  CHECK(half.hi >= 0.75);
  CHECK(half.method == "wilson");
  CHECK_THROWS_AS((void)estimate_psi(z1, 0.5, 2, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS((void)estimate_psi(z1, 0.5, kMaxLazyCap + 1, 10, 1), CapExceeded);
}

TEST_CASE("psi table is nonincreasing in n within one batch") {
  const std::vector<std::size_t> ns = {1, 2, 5, 10, 20, 40, 80};
  const auto t = estimate_psi_table(LatticeSpec::hypercubic(2), 0.45, ns, 20000, 3);
  for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i].point <= t[i - 1].point);
  CHECK(t.back().truncated_fraction == doctest::Approx(t.back().point));
}

TEST_CASE("thread count does not change results") {
  const std::vector<std::size_t> ns = {2, 10, 30};
  const auto spec = LatticeSpec::triangular();
  EstimatorOptions one{1}, four{4};
  const auto a = estimate_psi_table(spec, 0.3, ns, 5000, 8, one);
  const auto b = estimate_psi_table(spec, 0.3, ns, 5000, 8, four);
  for (std::size_t i = 0; i < ns.size(); ++i) {
    CHECK(a[i].point == b[i].point);
    CHECK(a[i].lo == b[i].lo);
  }
  const auto ma = estimate_magnetization(spec, 0.3, 0.2, 500, 3000, 4, one);
  const auto mb = estimate_magnetization(spec, 0.3, 0.2, 500, 3000, 4, four);
  CHECK(ma.lower.point == mb.lower.point);
  CHECK(ma.upper.hi == mb.upper.hi);
}

TEST_CASE("estimate_magnetization") {
  const auto z2 = LatticeSpec::hypercubic(2);
  SUBCASE("p = 0") {
    const double h = 0.4;
    const auto m = estimate_magnetization(z2, 0.0, h, 100, 1000, 1);
    CHECK(m.lower.point == doctest::Approx(1 - std::exp(-h)).epsilon(1e-14));
    CHECK(m.upper.point == m.lower.point);
    CHECK(m.lower.hi - m.lower.lo < 1e-12);
  }
  SUBCASE("large h stays in bounds") {
    const auto m = estimate_magnetization(z2, 0.5, 20.0, 100, 1000, 1);
    CHECK(m.lower.point >= 1 - std::exp(-20.0));
    CHECK(m.upper.point <= 1.0);
  }
  SUBCASE("finite-ball value is a floor; lower <= upper; gap bound") {
    const double p = 0.3, h = 0.5;
    const std::size_t cap = 10000;
    const auto m = estimate_magnetization(z2, p, h, cap, 100000, 5);
    CHECK(m.lower.point <= m.upper.point);
    CHECK(m.lower.lo <= m.upper.hi);
    CHECK(m.upper.point - m.lower.point <= m.truncated_fraction * std::exp(-h * cap) + 1e-15);
    const double floor = exact_magnetization(build_ball(z2, 2), p, h);
    CHECK(m.upper.hi >= floor);
  }
  SUBCASE("truncated runs split the fields") {
    const auto m = estimate_magnetization(z2, 1.0, 0.01, 50, 200, 1);
    CHECK(m.truncated_fraction == 1.0);
    CHECK(m.upper.point == 1.0);
    CHECK(m.lower.point == doctest::Approx(1 - std::exp(-0.5)).epsilon(1e-14));
  }
}

TEST_CASE("common random numbers make m monotone pointwise") {
  const auto z2 = LatticeSpec::hypercubic(2);
  EstimatorOptions crn;
  crn.common_random_numbers = true;
  double prev = 0.0;
  for (double p : {0.1, 0.3, 0.45, 0.5, 0.6}) {
    const auto m = estimate_magnetization(z2, p, 0.1, 2000, 2000, 77, crn);
    CHECK(m.lower.point >= prev);
    prev = m.lower.point;
  }
  prev = 0.0;
  for (double h : {0.01, 0.05, 0.1, 0.5, 1.0}) {
    const auto m = estimate_magnetization(z2, 0.4, h, 2000, 2000, 77, crn);
    CHECK(m.lower.point >= prev);
    prev = m.lower.point;
  }
}

TEST_CASE("theorem12_verdict") {
  const auto z2 = LatticeSpec::hypercubic(2);
  SUBCASE("n = 1 always passes") {
    const auto rep = theorem12_verdict(z2, 0.45, 0.1, {1}, 2000, 1000, 3);
    CHECK(rep.rows.front().verdict == Verdict::pass);
  }
  SUBCASE("tiny h deep subcritical never fails") {
    const auto rep = theorem12_verdict(z2, 0.2, 1e-4, {2, 4, 8}, 20000, 1000, 3);
    CHECK_FALSE(rep.any_fail());
    CHECK(rep.q <= 0.2);
    CHECK(rep.q_prime <= rep.q);
  }
  CHECK(std::string(verdict_name(Verdict::marginal)) == "MARGINAL");
}

TEST_CASE("decay_fit") {
  std::vector<std::pair<std::size_t, EstimateCI>> exact;
  for (std::size_t n = 10; n <= 100; n += 10) {
    EstimateCI e;
    e.point = e.lo = e.hi = 0.8 * std::exp(-0.1 * static_cast<double>(n));
    exact.emplace_back(n, e);
  }
  auto fit = decay_fit(exact);
  CHECK(std::abs(fit.rate - 0.1) < 1e-9);
  CHECK(std::abs(fit.prefactor - 0.8) < 1e-9);
  CHECK(std::abs(fit.r2 - 1.0) < 1e-9);
  // Same data with widths proportional to the value: still exact.
  for (auto& [n, e] : exact) {
    e.lo = 0.9 * e.point;
    e.hi = 1.1 * e.point + 1e-3 * static_cast<double>(n) * e.point;
  }
  fit = decay_fit(exact);
  CHECK(std::abs(fit.rate - 0.1) < 1e-9);
  CHECK(std::abs(fit.r2 - 1.0) < 1e-9);
  std::vector<std::pair<std::size_t, EstimateCI>> flat;
  for (std::size_t n = 1; n <= 6; ++n) {
    EstimateCI e;
    e.point = e.lo = e.hi = 0.25;
    flat.emplace_back(n, e);
  }
  CHECK(decay_fit(flat).rate == 0.0);
  flat.resize(4);
  CHECK_THROWS_AS((void)decay_fit(flat), std::invalid_argument);
}

TEST_CASE("meanfield_verdict") {
  const auto z2 = LatticeSpec::hypercubic(2);
  const auto rows = meanfield_verdict(z2, {0.0, 1.0}, 0.05, 1000, 200, 1);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].verdict == Verdict::pass);
  CHECK(rows[0].q.hi == 0.0);
  CHECK(rows[1].verdict == Verdict::pass);
  CHECK(rows[1].q.lo == 0.0);
  CHECK_THROWS_AS((void)meanfield_verdict(LatticeSpec::hypercubic(3), {0.5}, 0.05, 100, 10, 1), std::invalid_argument);
}

TEST_CASE("crossing probe at the self-dual point") {
  const auto c = crossing_probability(8, 0.5, 20000, 5);
  CHECK(c.lo <= 0.5);
  CHECK(c.hi >= 0.5);
  CHECK(crossing_probability(4, 0.0, 100, 1).point == 0.0);
  CHECK(crossing_probability(4, 1.0, 100, 1).point == 1.0);
}

TEST_CASE("ball estimator calibration, short run") {
  const auto line = build_ball(LatticeSpec::hypercubic(1), 1);
  const auto one = induced_subgraph(line, {line.origin(), static_cast<std::uint32_t>(line.find({1}))});
  int covered = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    const auto e = estimate_psi_ball(one, 0.3, 2, 1000, t);
    covered += (e.lo <= 0.3 && 0.3 <= e.hi) ? 1 : 0;
  }
  CHECK(covered >= 97);
}
