#ifndef APERIODIC_TRANSFER_HPP
#define APERIODIC_TRANSFER_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>

#include "aperiodic/log_value.hpp"
#include "aperiodic/potential.hpp"

namespace aperiodic {

// 2x2 real matrix in normalized form. The represented matrix is
// 2^exp2() * m, i.e. e^{log_scale()} * m. After every renormalization the
// largest |entry| of m lies in [1/2, 1), so arbitrarily long unimodular
// products neither overflow nor underflow. Rescaling is by a power of two
// and therefore exact.
class ScaledMatrix2 {
 public:
  ScaledMatrix2() = default;  // identity, exp2 = 0

  static ScaledMatrix2 from_entries(double a00, double a01, double a10, double a11) {
    ScaledMatrix2 r;
    r.m_ = {a00, a01, a10, a11};
    r.normalize();
    return r;
  }

  double entry(int row, int col) const { return m_[2 * row + col]; }
  std::int64_t exp2() const { return exp2_; }
  double log_scale() const { return static_cast<double>(exp2_) * std::numbers::ln2; }

  // Sign and log-magnitude of the represented (row, col) entry.
  LogValue entry_log(int row, int col) const {
    const double e = entry(row, col);
    if (e == 0.0) return {};
    return {e > 0.0 ? 1 : -1, std::log(std::fabs(e)) + log_scale()};
  }

  // log of the spectral norm of the represented matrix.
  double log_spectral_norm() const;

  // log of |det| of the represented matrix (exact two-product form).
  double log_abs_det() const;

  // m <- [[t, -1], [1, 0]] * m followed by renormalization.
  void left_step(double t) {
    const double na = t * m_[0] - m_[2];
    const double nb = t * m_[1] - m_[3];
    m_[2] = m_[0];
    m_[3] = m_[1];
    m_[0] = na;
    m_[1] = nb;
    normalize();
  }

  void normalize() {
    double mx = std::fabs(m_[0]);
    for (int i = 1; i < 4; ++i) mx = std::max(mx, std::fabs(m_[i]));
    if (mx == 0.0) return;
    int e = 0;
    std::frexp(mx, &e);
    if (e != 0) {
      const double s = std::ldexp(1.0, -e);
      for (double& x : m_) x *= s;
      exp2_ += e;
    }
  }

  friend ScaledMatrix2 operator*(const ScaledMatrix2& a, const ScaledMatrix2& b) {
    ScaledMatrix2 r;
    r.m_ = {a.m_[0] * b.m_[0] + a.m_[1] * b.m_[2],
            a.m_[0] * b.m_[1] + a.m_[1] * b.m_[3],
            a.m_[2] * b.m_[0] + a.m_[3] * b.m_[2],
            a.m_[2] * b.m_[1] + a.m_[3] * b.m_[3]};
    r.exp2_ = a.exp2_ + b.exp2_;
    r.normalize();
    return r;
  }

 private:
  std::array<double, 4> m_{1.0, 0.0, 0.0, 1.0};
  std::int64_t exp2_ = 0;
};

// One-site step matrix [[E - v, -1], [1, 0]]; determinant exactly 1.
std::array<double, 4> step_matrix(double E, double v);

// Product A_N ... A_2 A_1 with A_i the step matrix at the i-th window
// value; later factors multiply on the left. Renormalizes every step.
ScaledMatrix2 transfer_product(double E, std::span<const double> values);
inline ScaledMatrix2 transfer_product(double E, const PotentialWindow& w) {
  return transfer_product(E, w.view());
}

// Characteristic determinants of the restricted operator: det_n is
// det(E - H restricted to the first n window sites), det_nm1 the same at
// n-1. Three-term recurrence p_n = (E - v_n) p_{n-1} - p_{n-2}, p_0 = 1,
// p_{-1} = 0, carried in sign/log form.
struct DetTriple {
  std::int64_t n = 0;
  LogValue det_n = LogValue::one();
  LogValue det_nm1;
};
DetTriple char_det(double E, std::span<const double> values);
inline DetTriple char_det(double E, const PotentialWindow& w) {
  return char_det(E, w.view());
}

// Cross-check of the transfer product against the four determinant
// recurrences (full window, shifted by one, truncated by one, both).
// Entries below 1e-14 of the matrix scale are compared absolutely.
struct IdentityCheck {
  bool pass = false;
  double max_discrepancy = 0.0;
};
IdentityCheck verify_transfer_det_identity(double E, std::span<const double> values,
                                           double tol);
inline IdentityCheck verify_transfer_det_identity(double E, const PotentialWindow& w,
                                                  double tol) {
  return verify_transfer_det_identity(E, w.view(), tol);
}

}  // namespace aperiodic

#endif
