#include "aperiodic/transfer.hpp"

#include <algorithm>
#include <cmath>

#include "aperiodic/errors.hpp"

namespace aperiodic {

double ScaledMatrix2::log_spectral_norm() const {
  // sigma_max^2 = (f + sqrt(f^2 - 4 det^2)) / 2 with f the squared
  // Frobenius norm; cancellation only shrinks the (clamped) discriminant.
  const double f = m_[0] * m_[0] + m_[1] * m_[1] + m_[2] * m_[2] + m_[3] * m_[3];
  const double det = m_[0] * m_[3] - m_[1] * m_[2];
  const double disc = std::max(0.0, f * f - 4.0 * det * det);
  const double smax2 = 0.5 * (f + std::sqrt(disc));
  return 0.5 * std::log(smax2) + log_scale();
}

double ScaledMatrix2::log_abs_det() const {
  const double det = m_[0] * m_[3] - m_[1] * m_[2];
  return std::log(std::fabs(det)) + 2.0 * log_scale();
}

std::array<double, 4> step_matrix(double E, double v) {
  if (!std::isfinite(E) || !std::isfinite(v)) {
    throw InputError("step_matrix: non-finite input");
  }
  return {E - v, -1.0, 1.0, 0.0};
}

ScaledMatrix2 transfer_product(double E, std::span<const double> values) {
  if (values.empty()) throw InputError("transfer_product: empty window");
  if (!std::isfinite(E)) throw InputError("transfer_product: non-finite energy");
  ScaledMatrix2 m;
  for (const double v : values) {
    const double t = E - v;
    if (!std::isfinite(t)) throw InputError("transfer_product: non-finite value");
    m.left_step(t);
  }
  return m;
}

DetTriple char_det(double E, std::span<const double> values) {
  if (!std::isfinite(E)) throw InputError("char_det: non-finite energy");
  LogValue prev;                    // p_{-1} = 0
  LogValue cur = LogValue::one();   // p_0 = 1
  for (const double v : values) {
    const double t = E - v;
    if (!std::isfinite(t)) throw InputError("char_det: non-finite value");
    const LogValue next = LogValue::from_double(t) * cur - prev;
    prev = cur;
    cur = next;
  }
  return {static_cast<std::int64_t>(values.size()), cur, prev};
}

IdentityCheck verify_transfer_det_identity(double E, std::span<const double> values,
                                           double tol) {
  const std::size_t n = values.size();
  if (n < 2) throw InputError("verify_transfer_det_identity: window length must be >= 2");

  const ScaledMatrix2 m = transfer_product(E, values);
  // Expected entries: [[ p(full), -p(shifted) ], [ p(truncated), -p(both) ]].
  const LogValue expect[4] = {
      char_det(E, values).det_n,
      -char_det(E, values.subspan(1)).det_n,
      char_det(E, values.first(n - 1)).det_n,
      -char_det(E, values.subspan(1, n - 2)).det_n,
  };

  // Entries smaller than 1e-14 of the matrix scale carry no relative
  // information; both sides below that line count as agreeing.
  double max_abs = 0.0;
  for (int i = 0; i < 4; ++i) {
    max_abs = std::max(max_abs, std::fabs(m.entry(i / 2, i % 2)));
  }
  const double floor_log = std::log(max_abs) + m.log_scale() + std::log(1e-14);

  IdentityCheck out;
  out.pass = true;
  for (int i = 0; i < 4; ++i) {
    const LogValue actual = m.entry_log(i / 2, i % 2);
    const LogValue expected = expect[i];
    const bool actual_tiny = actual.is_zero() || actual.log_mag() < floor_log;
    const bool expected_tiny = expected.is_zero() || expected.log_mag() < floor_log;
    if (actual_tiny && expected_tiny) continue;
    if (actual.sign() != expected.sign()) {
      out.pass = false;
      out.max_discrepancy = std::numeric_limits<double>::infinity();
      continue;
    }
    const double rel = std::fabs(actual.log_mag() - expected.log_mag()) /
                       std::max({1.0, std::fabs(actual.log_mag()),
                                 std::fabs(expected.log_mag())});
    out.max_discrepancy = std::max(out.max_discrepancy, rel);
    if (rel > tol) out.pass = false;
  }
  return out;
}

}  // namespace aperiodic
