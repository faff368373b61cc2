#include "aperiodic/green.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "aperiodic/errors.hpp"
#include "aperiodic/transfer.hpp"

namespace aperiodic {

namespace {

constexpr double kPivotFloor = std::numeric_limits<double>::min();

double gershgorin_radius(std::span<const double> v) {
  double mx = 0.0;
  for (const double x : v) mx = std::max(mx, std::fabs(x));
  return mx + 2.0;
}

// Eigenvalue number `index` (1-based, ascending) by bisection on the
// Sturm count. [lo, hi] must bracket the whole spectrum.
double eigenvalue_by_index(std::span<const double> v, std::int64_t index, double lo,
                           double hi) {
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval at rounding resolution
    if (sturm_count(v, mid) >= index) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct Factorization {
  std::vector<double> d;  // pivots
  std::vector<double> l;  // subdiagonal multipliers, l[i] = 1/d[i]
  bool ok = false;
};

// LDL^T of tridiag(v - E, offdiag 1); fails on a pivot at underflow level.
Factorization factor_shifted(std::span<const double> v, double E) {
  const std::size_t n = v.size();
  Factorization f;
  f.d.resize(n);
  f.l.assign(n, 0.0);
  double d = v[0] - E;
  if (std::fabs(d) < kPivotFloor) return f;
  f.d[0] = d;
  for (std::size_t i = 1; i < n; ++i) {
    f.l[i - 1] = 1.0 / f.d[i - 1];
    d = (v[i] - E) - f.l[i - 1];
    if (std::fabs(d) < kPivotFloor) return f;
    f.d[i] = d;
  }
  f.ok = true;
  return f;
}

bool is_denormal(double x) { return x != 0.0 && std::fabs(x) < kPivotFloor; }

}  // namespace

std::int64_t sturm_count(std::span<const double> v, double x) {
  if (v.empty()) throw InputError("sturm_count: empty window");
  std::int64_t count = 0;
  double prev = 1.0;
  bool first = true;
  for (const double vi : v) {
    double q = (vi - x) - (first ? 0.0 : 1.0 / prev);
    first = false;
    if (std::fabs(q) < kPivotFloor) q = -kPivotFloor;
    if (q < 0.0) ++count;
    prev = q;
  }
  return count;
}

std::vector<double> spectrum(std::span<const double> v) {
  const std::int64_t n = static_cast<std::int64_t>(v.size());
  if (n < 1) throw InputError("spectrum: empty window");
  if (n > kMaxSpectrumLength) {
    throw SizeError("spectrum: window length exceeds the cap of " +
                    std::to_string(kMaxSpectrumLength));
  }
  const double r = gershgorin_radius(v);
  std::vector<double> eig;
  eig.reserve(static_cast<std::size_t>(n));

  struct Seg {
    double lo, hi;
    std::int64_t clo, chi;  // Sturm counts at lo and hi
  };
  std::vector<Seg> stack{{-r, r, 0, n}};
  const double tol = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, r);
  while (!stack.empty()) {
    const Seg s = stack.back();
    stack.pop_back();
    if (s.chi == s.clo) continue;
    if (s.hi - s.lo <= tol) {
      const double x = 0.5 * (s.lo + s.hi);
      for (std::int64_t i = 0; i < s.chi - s.clo; ++i) eig.push_back(x);
      continue;
    }
    const double mid = 0.5 * (s.lo + s.hi);
    const std::int64_t cmid = sturm_count(v, mid);
    stack.push_back({mid, s.hi, cmid, s.chi});
    stack.push_back({s.lo, mid, s.clo, cmid});
  }
  std::sort(eig.begin(), eig.end());
  return eig;
}

double dist_to_spectrum(std::span<const double> v, double E) {
  if (!std::isfinite(E)) throw InputError("dist_to_spectrum: non-finite energy");
  const std::int64_t n = static_cast<std::int64_t>(v.size());
  if (n < 1) throw InputError("dist_to_spectrum: empty window");
  const double r = gershgorin_radius(v);
  const double lo = std::min(-r, E) - 1.0;
  const double hi = std::max(r, E) + 1.0;
  const std::int64_t below = sturm_count(v, E);
  double dist = std::numeric_limits<double>::infinity();
  if (below >= 1) {
    const double lam = eigenvalue_by_index(v, below, lo, hi);
    dist = std::min(dist, std::max(0.0, E - lam));
  }
  if (below < n) {
    const double lam = eigenvalue_by_index(v, below + 1, lo, hi);
    dist = std::min(dist, std::max(0.0, lam - E));
  }
  return dist;
}

double singular_tolerance(std::span<const double> v) {
  return 1e-12 * std::max(1.0, gershgorin_radius(v));
}

double resolvent_norm(double E, std::span<const double> v) {
  const double d = dist_to_spectrum(v, E);
  if (d == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / d;
}

LogValue green_entry_cramer(double E, std::span<const double> v, std::int64_t k1,
                            std::int64_t k2) {
  const std::int64_t n = static_cast<std::int64_t>(v.size());
  if (n < 1) throw InputError("green_entry_cramer: empty window");
  if (!(1 <= k1 && k1 <= k2 && k2 <= n)) {
    throw InputError("green_entry_cramer: need 1 <= k1 <= k2 <= N");
  }
  const double dist = dist_to_spectrum(v, E);
  if (dist <= singular_tolerance(v)) {
    throw NearSingularError("green_entry_cramer: E within tolerance of the spectrum",
                            dist);
  }
  const LogValue full = char_det(E, v).det_n;
  const LogValue prefix =
      k1 >= 2 ? char_det(E, v.first(static_cast<std::size_t>(k1 - 1))).det_n
              : LogValue::one();
  const LogValue suffix =
      k2 <= n - 1 ? char_det(E, v.subspan(static_cast<std::size_t>(k2))).det_n
                  : LogValue::one();
  return (prefix.abs() * suffix.abs()) / full.abs();
}

GreenColumn green_column_direct(double E, std::span<const double> v, std::int64_t k) {
  const std::int64_t n = static_cast<std::int64_t>(v.size());
  if (n < 1) throw InputError("green_column_direct: empty window");
  if (k < 1 || k > n) throw InputError("green_column_direct: column index out of range");
  if (!std::isfinite(E)) throw InputError("green_column_direct: non-finite energy");

  GreenColumn out;
  const double shifts[3] = {0.0, 1e-12, -1e-12};
  Factorization f;
  for (const double s : shifts) {
    f = factor_shifted(v, E + s);
    if (f.ok) {
      out.shift = s;
      out.perturbed = (s != 0.0);
      break;
    }
  }
  if (!f.ok) {
    throw NearSingularError("green_column_direct: pivot breakdown persists under +-1e-12 shifts");
  }

  const std::size_t nk = static_cast<std::size_t>(k - 1);
  const std::size_t sz = static_cast<std::size_t>(n);
  std::vector<double> y(sz, 0.0);
  y[nk] = 1.0;
  for (std::size_t i = nk + 1; i < sz; ++i) {
    y[i] = -f.l[i - 1] * y[i - 1];
    if (is_denormal(y[i]) || (y[i] == 0.0 && y[i - 1] != 0.0 && f.l[i - 1] != 0.0)) {
      out.underflow = true;
    }
  }
  std::vector<double>& x = out.x;
  x.assign(sz, 0.0);
  x[sz - 1] = y[sz - 1] / f.d[sz - 1];
  for (std::size_t i = sz - 1; i-- > 0;) {
    x[i] = y[i] / f.d[i] - f.l[i] * x[i + 1];
    if (is_denormal(x[i])) out.underflow = true;
  }
  return out;
}

std::vector<LogValue> green_column_log(double E, std::span<const double> v,
                                       std::int64_t k) {
  const std::int64_t n = static_cast<std::int64_t>(v.size());
  if (n < 1) throw InputError("green_column_log: empty window");
  if (k < 1 || k > n) throw InputError("green_column_log: column index out of range");
  if (!std::isfinite(E)) throw InputError("green_column_log: non-finite energy");

  // Prefix dets P[i] over the first i sites and suffix dets S[j] over the
  // last j sites, both in the det(E - H) convention.
  std::vector<LogValue> P(static_cast<std::size_t>(n) + 1);
  std::vector<LogValue> S(static_cast<std::size_t>(n) + 1);
  P[0] = LogValue::one();
  S[0] = LogValue::one();
  {
    LogValue prev;  // zero
    for (std::int64_t i = 1; i <= n; ++i) {
      const double t = E - v[static_cast<std::size_t>(i - 1)];
      if (!std::isfinite(t)) throw InputError("green_column_log: non-finite value");
      const LogValue next = LogValue::from_double(t) * P[static_cast<std::size_t>(i - 1)] - prev;
      prev = P[static_cast<std::size_t>(i - 1)];
      P[static_cast<std::size_t>(i)] = next;
    }
    prev = LogValue();
    for (std::int64_t j = 1; j <= n; ++j) {
      const double t = E - v[static_cast<std::size_t>(n - j)];
      const LogValue next = LogValue::from_double(t) * S[static_cast<std::size_t>(j - 1)] - prev;
      prev = S[static_cast<std::size_t>(j - 1)];
      S[static_cast<std::size_t>(j)] = next;
    }
  }
  const LogValue full = P[static_cast<std::size_t>(n)];
  if (full.is_zero()) {
    throw NearSingularError("green_column_log: det(E - H) is exactly zero", 0.0);
  }

  // G(x, k) = -P[min-1] * S[n - max] / P[n]; sign fixed by the dense
  // tridiagonal inverse formula (validated against the direct solver).
  std::vector<LogValue> col(static_cast<std::size_t>(n));
  for (std::int64_t x = 1; x <= n; ++x) {
    const std::int64_t a = std::min(x, k);
    const std::int64_t b = std::max(x, k);
    col[static_cast<std::size_t>(x - 1)] =
        -(P[static_cast<std::size_t>(a - 1)] * S[static_cast<std::size_t>(n - b)]) / full;
  }
  return col;
}

}  // namespace aperiodic
