#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "aperiodic/errors.hpp"
#include "aperiodic/potential.hpp"
#include "support.hpp"

using namespace aperiodic;
using testsupport::TestRng;

TEST_CASE("mobius_sieve small values") {
  const auto mu = mobius_sieve(10);
  CHECK(mu[1] == 1);
  CHECK(mu[2] == -1);
  CHECK(mu[3] == -1);
  CHECK(mu[4] == 0);   // 4 = 2^2
  CHECK(mu[6] == 1);   // 6 = 2*3
  CHECK(mu[8] == 0);
  CHECK(mu[9] == 0);
  CHECK(mu[10] == 1);
}

TEST_CASE("mobius_sieve matches trial factorization up to 1e4") {
  const auto mu = mobius_sieve(10000);
  for (std::int64_t n = 1; n <= 10000; ++n) {
    CAPTURE(n);
    REQUIRE(mu[static_cast<std::size_t>(n)] == testsupport::mobius_by_factorization(n));
  }
}

TEST_CASE("Mertens sum at 10 equals -1 against the factorization oracle") {
  const auto mu = mobius_sieve(10);
  int sieve_sum = 0, oracle_sum = 0;
  for (std::int64_t n = 1; n <= 10; ++n) {
    sieve_sum += mu[static_cast<std::size_t>(n)];
    oracle_sum += testsupport::mobius_by_factorization(n);
  }
  CHECK(sieve_sum == -1);
  CHECK(oracle_sum == -1);
}

TEST_CASE("mu(n) == 0 iff a squared prime divides n") {
  const auto mu = mobius_sieve(10000);
  for (std::int64_t n = 1; n <= 10000; ++n) {
    bool has_square = false;
    for (std::int64_t p = 2; p * p <= n; ++p) {
      if (n % (p * p) == 0) {
        has_square = true;
        break;
      }
    }
    CAPTURE(n);
    REQUIRE((mu[static_cast<std::size_t>(n)] == 0) == has_square);
  }
}

TEST_CASE("mobius_sieve rejects bad sizes") {
  CHECK_THROWS_AS(mobius_sieve(0), SizeError);
  CHECK_THROWS_AS(mobius_sieve(kMaxSieveLength + 1), SizeError);
}

TEST_CASE("sample: mobius window") {
  const auto w = sample(PotentialSpec::mobius(1.0), 1, 5);
  const std::vector<double> want = {1, -1, -1, 0, -1};
  CHECK(w.values == want);
  CHECK(w.start == 1);
  CHECK(w.alphabet_bound == 3);
}

TEST_CASE("sample: free window is zero") {
  const auto w = sample(PotentialSpec::free(), 7, 3);
  CHECK(w.values == std::vector<double>{0, 0, 0});
}

TEST_CASE("sample: periodic readout with coupling") {
  const double a = 0.25, b = -1.5;
  const auto w = sample(PotentialSpec::periodic({a, b}, 2.0), 2, 3);
  CHECK(w.values == std::vector<double>{2 * b, 2 * a, 2 * b});
}

TEST_CASE("sample determinism and overlap consistency") {
  const auto spec = PotentialSpec::bernoulli(0.4, 1.0, -1.0, 12345, 1.5);
  const auto w1 = sample(spec, 10, 50);
  const auto w2 = sample(spec, 10, 50);
  CHECK(w1.values == w2.values);
  // overlapping window agrees on the shared indices
  const auto w3 = sample(spec, 30, 50);
  for (int i = 0; i < 30; ++i) {
    CHECK(w3.values[static_cast<std::size_t>(i)] ==
          w1.values[static_cast<std::size_t>(i + 20)]);
  }
}

TEST_CASE("sample argument validation") {
  CHECK_THROWS_AS(sample(PotentialSpec::free(), 0, 5), InputError);
  CHECK_THROWS_AS(sample(PotentialSpec::free(), 1, 0), InputError);
  CHECK_THROWS_AS(sample(PotentialSpec::custom({1.0, 2.0}), 1, 3), RangeError);
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(PotentialSpec::mobius(0.0), InputError);
  CHECK_THROWS_AS(PotentialSpec::periodic({}, 1.0), InputError);
  CHECK_THROWS_AS(PotentialSpec::bernoulli(1.5, 1, -1, 0, 1.0), InputError);
}

TEST_CASE("spec parsing round trips") {
  const auto m = PotentialSpec::parse("mobius", 2.0);
  CHECK(m.kind == PotentialSpec::Kind::Mobius);
  CHECK(m.lambda == 2.0);

  const auto p = PotentialSpec::parse("periodic:0.5,-0.5", 1.0);
  CHECK(p.word == std::vector<double>{0.5, -0.5});

  const auto b = PotentialSpec::parse("bernoulli:0.25,1,-1,77", 1.0);
  CHECK(b.prob == 0.25);
  CHECK(b.seed == 77);

  const auto b2 = PotentialSpec::parse("bernoulli:0.25,1,-1", 1.0, 99);
  CHECK(b2.seed == 99);

  CHECK_THROWS_AS(PotentialSpec::parse("gibberish", 1.0), InputError);
  CHECK_THROWS_AS(PotentialSpec::parse("periodic:1,zzz", 1.0), InputError);
  CHECK_THROWS_AS(PotentialSpec::parse("custom:@/does/not/exist.csv", 1.0), InputError);
}

TEST_CASE("ap_zero_search worked examples") {
  // k + n = 7, d = 3: 7 + 6*3 = 25 = 5^2
  auto r = ap_zero_search(6, 1, 3);
  CHECK(r.p == 5);
  CHECK(r.j == 6);
  // k + n = 5, d = 1: 5 + 3 = 8, divisible by 4
  r = ap_zero_search(4, 1, 1);
  CHECK(r.p == 2);
  CHECK(r.j == 3);
  // k + n = 4, d = 1: already divisible by 4
  r = ap_zero_search(3, 1, 1);
  CHECK(r.p == 2);
  CHECK(r.j == 0);
}

TEST_CASE("ap_zero_search postcondition on a sweep") {
  const auto mu = mobius_sieve(300000);
  for (std::int64_t d = 1; d <= 10; ++d) {
    for (std::int64_t s = 1; s <= 200; ++s) {
      const auto r = ap_zero_search(s - 1, 1, d);
      CAPTURE(d);
      CAPTURE(s);
      REQUIRE(r.p > d);
      REQUIRE(r.p < 10 * d);
      REQUIRE(r.j >= 0);
      REQUIRE(r.j < r.p * r.p);
      const std::int64_t value = s + r.j * d;
      REQUIRE(value % (r.p * r.p) == 0);
      REQUIRE(mu[static_cast<std::size_t>(value)] == 0);
    }
  }
}

TEST_CASE("ap_zero_search argument validation") {
  CHECK_THROWS_AS(ap_zero_search(-1, 1, 1), InputError);
  CHECK_THROWS_AS(ap_zero_search(0, 0, 1), InputError);
  CHECK_THROWS_AS(ap_zero_search(0, 1, 0), InputError);
  CHECK_THROWS_AS(ap_zero_search(0, 1, std::int64_t{1} << 21), SizeError);
}

TEST_CASE("eventual_periodicity_check") {
  const auto periodic = sample(PotentialSpec::periodic({0.7, -0.3}, 1.0), 1, 40);
  CHECK(eventual_periodicity_check(periodic, 2, 1));
  CHECK_FALSE(eventual_periodicity_check(periodic, 1, 1));

  const auto mob = sample(PotentialSpec::mobius(1.0), 1, 100);
  CHECK_FALSE(eventual_periodicity_check(mob, 1, 1));  // mu(1) != mu(2)

  const auto zeros = sample(PotentialSpec::free(), 1, 20);
  for (std::int64_t d = 1; d <= 5; ++d) CHECK(eventual_periodicity_check(zeros, d, 1));

  CHECK_THROWS_AS(eventual_periodicity_check(zeros, 20, 1), RangeError);
  CHECK_THROWS_AS(eventual_periodicity_check(zeros, 3, 19), RangeError);
}

TEST_CASE("Potential window requires ensure for mobius") {
  Potential p(PotentialSpec::mobius(1.0));
  CHECK_THROWS_AS(p.window(1, 10), RangeError);
  p.ensure(10);
  const auto w = p.window(1, 10);
  CHECK(w.values[0] == 1.0);
  CHECK(w.values[3] == 0.0);
}

TEST_CASE("bernoulli alphabet and probabilities are sane") {
  TestRng rng(7);
  const auto spec = PotentialSpec::bernoulli(0.3, 2.0, -2.0, rng.next(), 1.0);
  const auto w = sample(spec, 1, 20000);
  std::int64_t hi = 0;
  for (const double v : w.values) {
    CHECK((v == 2.0 || v == -2.0));
    if (v == 2.0) ++hi;
  }
  // 20000 draws at p = 0.3: allow 5 sigma
  CHECK(hi > 20000 * 0.3 - 5 * 65);
  CHECK(hi < 20000 * 0.3 + 5 * 65);
}
