#ifndef APERIODIC_TESTS_SUPPORT_HPP
#define APERIODIC_TESTS_SUPPORT_HPP

// Test-only helpers: a fully deterministic RNG (identical across platforms
// and runs) and dense linear-algebra oracles independent of the library's
// own numerical routes.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "aperiodic/log_value.hpp"
#include "aperiodic/potential.hpp"

namespace testsupport {

struct TestRng {
  std::uint64_t state;
  explicit TestRng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() { return aperiodic::splitmix64(state++); }
  double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }
  std::int64_t index(std::int64_t lo, std::int64_t hi) {  // inclusive
    return lo + static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  double pick(std::initializer_list<double> xs) {
    const auto i = index(0, static_cast<std::int64_t>(xs.size()) - 1);
    return *(xs.begin() + i);
  }
};

// Dense E - H over the window values (H tridiagonal, off-diagonal 1).
inline Eigen::MatrixXd dense_shifted(double E, std::span<const double> v) {
  const auto n = static_cast<Eigen::Index>(v.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = E - v[static_cast<std::size_t>(i)];
    if (i + 1 < n) {
      m(i, i + 1) = -1.0;
      m(i + 1, i) = -1.0;
    }
  }
  return m;
}

// Dense H over the window values.
inline Eigen::MatrixXd dense_operator(std::span<const double> v) {
  return -dense_shifted(0.0, v);
}

// Sign/log determinant via full-pivot LU (oracle route).
inline aperiodic::LogValue dense_log_det(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return aperiodic::LogValue::one();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  int sign = static_cast<int>(lu.permutationP().determinant()) *
             static_cast<int>(lu.permutationQ().determinant());
  double log_abs = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double u = lu.matrixLU()(i, i);
    if (u == 0.0) return {};
    log_abs += std::log(std::fabs(u));
    if (u < 0.0) sign = -sign;
  }
  return {sign, log_abs};
}

// Dense inverse column of (H - E): oracle for the direct solver.
inline Eigen::VectorXd dense_green_column(double E, std::span<const double> v,
                                          std::int64_t k) {
  const Eigen::MatrixXd m = -dense_shifted(E, v);  // H - E
  Eigen::VectorXd e = Eigen::VectorXd::Zero(m.rows());
  e(static_cast<Eigen::Index>(k - 1)) = 1.0;
  return m.fullPivLu().solve(e);
}

// Dense symmetric eigenvalues, ascending: oracle for the Sturm route.
inline std::vector<double> dense_spectrum(std::span<const double> v) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_operator(v),
                                                    Eigen::EigenvaluesOnly);
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = es.eigenvalues()(static_cast<Eigen::Index>(i));
  }
  return out;
}

// Moebius via trial factorization: the independent sieve oracle.
inline int mobius_by_factorization(std::int64_t n) {
  int factors = 0;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) return 0;  // squared prime factor
    ++factors;
  }
  if (n > 1) ++factors;
  return factors % 2 == 0 ? 1 : -1;
}

inline bool log_close(const aperiodic::LogValue& a, const aperiodic::LogValue& b,
                      double tol) {
  if (a.is_zero() && b.is_zero()) return true;
  if (a.is_zero() || b.is_zero()) return false;
  return std::fabs(a.log_mag() - b.log_mag()) <= tol;
}

}  // namespace testsupport

#endif
