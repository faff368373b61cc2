#ifndef APERIODIC_GREEN_HPP
#define APERIODIC_GREEN_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "aperiodic/log_value.hpp"
#include "aperiodic/potential.hpp"

namespace aperiodic {

// Cap for full-spectrum computation (bisection is O(N^2 log)).
inline constexpr std::int64_t kMaxSpectrumLength = 8192;

// Number of eigenvalues of tridiag(v, offdiag 1) strictly below x,
// by the Sturm/LDL^T negative-pivot count.
std::int64_t sturm_count(std::span<const double> v, double x);

// All eigenvalues of the symmetric tridiagonal matrix with diagonal v and
// off-diagonal 1, ascending, each inside [min v - 2, max v + 2].
std::vector<double> spectrum(std::span<const double> v);
inline std::vector<double> spectrum(const PotentialWindow& w) { return spectrum(w.view()); }

// Distance from E to the nearest eigenvalue, via two targeted bisections.
double dist_to_spectrum(std::span<const double> v, double E);

// Threshold below which E counts as singular for this window.
double singular_tolerance(std::span<const double> v);

// Exact operator norm of (H - E)^{-1} for the self-adjoint restriction:
// 1 / dist(E, spectrum). Returns +inf when E hits an eigenvalue.
double resolvent_norm(double E, std::span<const double> v);
inline double resolvent_norm(double E, const PotentialWindow& w) {
  return resolvent_norm(E, w.view());
}

// |G(k1, k2)| as a LogValue (sign +1, or 0 for an exactly zero entry) via
// the determinant-ratio route: |p_{k1-1}| * |q_{N-k2}| / |p_N| with p the
// prefix and q the suffix determinant recurrences. 1 <= k1 <= k2 <= N.
LogValue green_entry_cramer(double E, std::span<const double> v, std::int64_t k1,
                            std::int64_t k2);

// Column G e_k of G = (H - E)^{-1} by LDL^T factorization in plain doubles.
// On pivot breakdown retries at E +- 1e-12 (perturbed flag set); if both
// retries break down, throws NearSingularError. underflow flags entries
// whose magnitude fell below the normal double range during the solve.
struct GreenColumn {
  std::vector<double> x;
  bool perturbed = false;
  bool underflow = false;
  double shift = 0.0;
};
GreenColumn green_column_direct(double E, std::span<const double> v, std::int64_t k);

// Same column in signed log form, assembled from the prefix/suffix
// determinant recurrences; immune to overflow and underflow. Throws
// NearSingularError when det(E - H) is exactly zero.
std::vector<LogValue> green_column_log(double E, std::span<const double> v,
                                       std::int64_t k);

enum class GreenMethod { Cramer, Direct };

struct GreenEntry {
  std::int64_t k1 = 0;
  std::int64_t k2 = 0;
  LogValue value;
  GreenMethod method = GreenMethod::Direct;
};

}  // namespace aperiodic

#endif
