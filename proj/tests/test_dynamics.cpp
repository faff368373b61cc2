#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "aperiodic/dynamics.hpp"
#include "aperiodic/errors.hpp"
#include "aperiodic/green.hpp"
#include "aperiodic/transfer.hpp"
#include "support.hpp"

using namespace aperiodic;
using testsupport::TestRng;

TEST_CASE("free_gamma_closed_form") {
  CHECK(free_gamma_closed_form(0.0) == 0.0);
  CHECK(free_gamma_closed_form(2.0) == 0.0);
  CHECK(free_gamma_closed_form(-1.3) == 0.0);
  CHECK(free_gamma_closed_form(3.0) ==
        doctest::Approx(std::log((3.0 + std::sqrt(5.0)) / 2.0)).epsilon(1e-15));
  CHECK(free_gamma_closed_form(-3.0) == free_gamma_closed_form(3.0));
}

TEST_CASE("lyapunov_estimate: free potential") {
  const std::vector<double> z100(100, 0.0);
  CHECK(lyapunov_estimate(0.0, z100) == 0.0);  // period-4 rotation, norm 1

  const std::vector<double> z1e5(100000, 0.0);
  CHECK(lyapunov_estimate(3.0, z1e5) ==
        doctest::Approx(free_gamma_closed_form(3.0)).epsilon(1e-3));
  // inside the band the estimate stays tiny
  for (const double E : {0.3, -1.1, 1.9, -1.9}) {
    CHECK(lyapunov_estimate(E, z1e5) < 1e-3);
  }
}

TEST_CASE("lyapunov estimates are nonnegative") {
  TestRng rng(21);
  for (int c = 0; c < 25; ++c) {
    const std::int64_t n = rng.index(1, 5000);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = rng.pick({1.0, 0.0, -1.0});
    REQUIRE(lyapunov_estimate(rng.uniform(-4, 4), v) >= 0.0);
  }
}

TEST_CASE("birkhoff_lyapunov: degenerate forms") {
  const auto free = PotentialSpec::free();
  const double single = lyapunov_estimate(1.2, free, 4096, 1);
  CHECK(birkhoff_lyapunov(1.2, free, 4096, 4) == doctest::Approx(single).epsilon(1e-12));
  CHECK(birkhoff_lyapunov(1.2, free, 4096, 1) == single);

  const auto mob = PotentialSpec::mobius(1.5);
  CHECK(birkhoff_lyapunov(0.7, mob, 2048, 1) ==
        doctest::Approx(lyapunov_estimate(0.7, mob, 2048, 1)).epsilon(1e-12));
}

TEST_CASE("birkhoff_lyapunov: mobius stability across shift counts") {
  const auto spec = PotentialSpec::mobius(2.0);
  const double g8 = birkhoff_lyapunov(0.5, spec, 100000, 8);
  const double g16 = birkhoff_lyapunov(0.5, spec, 100000, 16);
  CHECK(g8 > 0.0);
  CHECK(g16 > 0.0);
  CHECK(std::fabs(g8 - g16) <= 0.15 * std::max(g8, g16));
}

TEST_CASE("shoot: free potential at E = 0 alternates 0, +-1") {
  const auto trace = shoot(0.0, PotentialSpec::free(), 4096);
  CHECK(trace.growth == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  for (const auto& c : trace.checkpoints) {
    if (c.n % 2 == 0) {
      CHECK(c.sign == 0);
    } else {
      CHECK(c.sign != 0);
      CHECK(c.log_abs == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("shoot: growth matches the free closed form") {
  const auto trace = shoot(3.0, PotentialSpec::free(), 100000);
  CHECK(trace.growth == doctest::Approx(free_gamma_closed_form(3.0)).epsilon(1e-3));
}

TEST_CASE("shoot: one step") {
  const auto spec = PotentialSpec::periodic({0.75}, 1.0);
  const auto trace = shoot(2.5, spec, 2);
  REQUIRE(!trace.checkpoints.empty());
  const auto& last = trace.checkpoints.back();
  CHECK(last.n == 2);
  CHECK(last.sign == 1);
  CHECK(last.log_abs == doctest::Approx(std::log(2.5 - 0.75)).epsilon(1e-14));
  CHECK_THROWS_AS(shoot(0.0, spec, 1), InputError);
}

TEST_CASE("solution_at agrees with an unscaled recurrence") {
  TestRng rng(22);
  for (int c = 0; c < 20; ++c) {
    const std::int64_t n = rng.index(2, 40);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = rng.uniform(-2, 2);
    const double E = rng.uniform(-4, 4);
    double prev = 0.0, cur = 1.0;
    for (std::int64_t i = 1; i < n; ++i) {
      const double next = (E - v[static_cast<std::size_t>(i - 1)]) * cur - prev;
      prev = cur;
      cur = next;
    }
    const LogValue got = solution_at(E, v, n);
    CAPTURE(c);
    if (cur == 0.0) {
      REQUIRE(got.is_zero());
    } else {
      REQUIRE(got.sign() == (cur > 0 ? 1 : -1));
      REQUIRE(got.log_mag() ==
              doctest::Approx(std::log(std::fabs(cur))).epsilon(1e-10).scale(1.0));
    }
  }
}

TEST_CASE("shooting vector equals the transfer product applied to (1, 0)") {
  TestRng rng(23);
  for (int c = 0; c < 15; ++c) {
    const std::int64_t n = rng.index(2, 3000);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = rng.pick({1.5, -1.5});
    const double E = rng.uniform(-4, 4);
    // psi_{n+1} = (M_n (psi_1, psi_0)^T)_1 with boundary (1, 0)
    const auto m = transfer_product(E, v);
    const LogValue psi = solution_at(E, v, n + 1);
    const LogValue top = m.entry_log(0, 0);
    CAPTURE(c);
    if (top.is_zero() || psi.is_zero()) {
      // both must vanish together
      REQUIRE(top.is_zero() == psi.is_zero());
      continue;
    }
    REQUIRE(psi.sign() == top.sign());
    REQUIRE(std::fabs(psi.log_mag() - top.log_mag()) <=
            1e-9 * static_cast<double>(n) * std::max(1.0, std::fabs(top.log_mag())));
  }
}

TEST_CASE("growth exponent agrees with the Lyapunov estimate when hyperbolic") {
  // free at E = 3: gamma ~ 0.96 > 0.1
  const std::vector<double> zeros(1000000, 0.0);
  const double gamma = lyapunov_estimate(3.0, zeros);
  const auto trace = shoot(3.0, zeros, 1000000);
  CHECK(std::fabs(trace.growth - gamma) < 5e-2);

  const auto spec = PotentialSpec::bernoulli(0.5, 1.0, -1.0, 99, 1.5);
  const double g2 = lyapunov_estimate(0.4, spec, 1000000, 1);
  if (g2 > 0.1) {
    const auto t2 = shoot(0.4, spec, 1000000);
    CHECK(std::fabs(t2.growth - g2) < 5e-2);
  }
}

TEST_CASE("green_solution_identity_check: worked cases") {
  const auto free = PotentialSpec::free();
  const auto r = green_solution_identity_check(0.5, free, 1, 10, 1e-8);
  CHECK(r.pass);
  CHECK(r.discrepancy < 1e-8);

  // ell = 1 algebra: psi_1 = -psi_2 G(1,1) reduces to psi_2 = E - v_1
  const auto spec = PotentialSpec::periodic({0.3}, 1.0);
  const auto r1 = green_solution_identity_check(1.7, spec, 1, 1, 1e-10);
  CHECK(r1.pass);
}

TEST_CASE("green_solution_identity_check: random cases") {
  TestRng rng(24);
  int done = 0;
  while (done < 10) {
    const std::int64_t ell = rng.index(2, 300);
    const std::int64_t x = rng.index(1, ell);
    PotentialSpec spec = PotentialSpec::mobius(rng.uniform(0.5, 2.0));
    if (rng.u01() < 0.5) {
      spec = PotentialSpec::bernoulli(0.5, 1.0, -1.0, rng.next(), rng.uniform(0.5, 2.0));
    }
    const double E = rng.uniform(-4, 4);
    try {
      const auto r = green_solution_identity_check(E, spec, x, ell, 1e-8);
      CAPTURE(ell);
      CAPTURE(x);
      CAPTURE(E);
      REQUIRE(r.pass);
      ++done;
    } catch (const NearSingularError&) {
      continue;  // resample: E too close to the restricted spectrum
    }
  }
}

TEST_CASE("green_solution_identity_check: near-singular energy throws") {
  // E = 1 is an eigenvalue of the free restriction on [1, 2]
  CHECK_THROWS_AS(green_solution_identity_check(1.0, PotentialSpec::free(), 1, 2, 1e-8),
                  NearSingularError);
  CHECK_THROWS_AS(green_solution_identity_check(0.5, PotentialSpec::free(), 3, 2, 1e-8),
                  InputError);
}

TEST_CASE("lyapunov_curve is deterministic and thread independent") {
  const auto spec = PotentialSpec::mobius(2.0);
  std::vector<double> grid;
  for (int i = 0; i < 16; ++i) grid.push_back(-4.0 + 8.0 * i / 15.0);
  const auto c1 = lyapunov_curve(spec, grid, 5000, 2, 1);
  const auto c8 = lyapunov_curve(spec, grid, 5000, 2, 8);
  REQUIRE(c1.gamma.size() == c8.gamma.size());
  for (std::size_t i = 0; i < c1.gamma.size(); ++i) {
    REQUIRE(c1.gamma[i] == c8.gamma[i]);  // bitwise equal
  }
}
