#include "aperiodic/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "aperiodic/errors.hpp"
#include "aperiodic/green.hpp"
#include "aperiodic/parallel.hpp"
#include "aperiodic/transfer.hpp"

namespace aperiodic {

double lyapunov_estimate(double E, std::span<const double> values) {
  if (values.empty()) throw InputError("lyapunov_estimate: empty window");
  const ScaledMatrix2 m = transfer_product(E, values);
  const double g = m.log_spectral_norm() / static_cast<double>(values.size());
  return std::max(0.0, g);
}

double lyapunov_estimate(double E, const PotentialSpec& spec, std::int64_t N,
                         std::int64_t start) {
  if (N < 1) throw InputError("lyapunov_estimate: N must be >= 1");
  Potential p(spec);
  p.ensure(start + N - 1);
  const PotentialWindow w = p.window(start, N);
  return lyapunov_estimate(E, w.view());
}

double birkhoff_lyapunov(double E, std::span<const double> full_values, std::int64_t N,
                         std::int64_t shifts) {
  if (N < 1) throw InputError("birkhoff_lyapunov: N must be >= 1");
  if (shifts < 1) throw InputError("birkhoff_lyapunov: shifts must be >= 1");
  if (static_cast<std::int64_t>(full_values.size()) < N * shifts) {
    throw RangeError("birkhoff_lyapunov: values must cover shifts * N entries");
  }
  double sum = 0.0;
  for (std::int64_t i = 0; i < shifts; ++i) {
    sum += lyapunov_estimate(
        E, full_values.subspan(static_cast<std::size_t>(i * N), static_cast<std::size_t>(N)));
  }
  return sum / static_cast<double>(shifts);
}

double birkhoff_lyapunov(double E, const PotentialSpec& spec, std::int64_t N,
                         std::int64_t shifts) {
  if (N < 1) throw InputError("birkhoff_lyapunov: N must be >= 1");
  if (shifts < 1) throw InputError("birkhoff_lyapunov: shifts must be >= 1");
  Potential p(spec);
  p.ensure(N * shifts);
  const PotentialWindow w = p.window(1, N * shifts);
  return birkhoff_lyapunov(E, w.view(), N, shifts);
}

double free_gamma_closed_form(double E) {
  const double a = std::fabs(E);
  if (a <= 2.0) return 0.0;
  return std::log(0.5 * (a + std::sqrt(a * a - 4.0)));
}

LyapunovCurve lyapunov_curve(const PotentialSpec& spec, std::span<const double> energies,
                             std::int64_t N, std::int64_t shifts, int threads) {
  if (N < 1) throw InputError("lyapunov_curve: N must be >= 1");
  if (shifts < 1) throw InputError("lyapunov_curve: shifts must be >= 1");
  LyapunovCurve curve;
  curve.energies.assign(energies.begin(), energies.end());
  curve.gamma.assign(energies.size(), 0.0);
  curve.N = N;
  curve.shifts = shifts;
  curve.spec = spec;

  Potential p(spec);
  p.ensure(N * shifts);
  const PotentialWindow w = p.window(1, N * shifts);
  const std::span<const double> values = w.view();
  parallel_for(static_cast<std::int64_t>(energies.size()), threads, [&](std::int64_t i) {
    curve.gamma[static_cast<std::size_t>(i)] =
        birkhoff_lyapunov(energies[static_cast<std::size_t>(i)], values, N, shifts);
  });
  return curve;
}

namespace {

// Scaled pair (psi_n, psi_{n-1}) stepped through the recurrence.
struct ScaledPair {
  double cur = 1.0;   // psi_1
  double prev = 0.0;  // psi_0
  std::int64_t exp2 = 0;

  void step(double t) {
    const double next = t * cur - prev;
    prev = cur;
    cur = next;
    double mx = std::max(std::fabs(cur), std::fabs(prev));
    if (mx == 0.0) return;
    int e = 0;
    std::frexp(mx, &e);
    if (e != 0) {
      const double s = std::ldexp(1.0, -e);
      cur *= s;
      prev *= s;
      exp2 += e;
    }
  }

  LogValue current() const {
    if (cur == 0.0) return {};
    return {cur > 0.0 ? 1 : -1,
            std::log(std::fabs(cur)) + static_cast<double>(exp2) * std::numbers::ln2};
  }
};

}  // namespace

ShootingTrace shoot(double E, std::span<const double> values, std::int64_t N) {
  if (N < 2) throw InputError("shoot: N must be >= 2");
  if (static_cast<std::int64_t>(values.size()) < N - 1) {
    throw RangeError("shoot: values must cover v_1 .. v_{N-1}");
  }
  if (!std::isfinite(E)) throw InputError("shoot: non-finite energy");

  std::int64_t stride = (N + 1023) / 1024;
  if (stride % 2 == 0) ++stride;  // hit both parities of period-2 solutions

  ShootingTrace trace;
  trace.E = E;
  trace.psi0 = 0.0;
  trace.psi1 = 1.0;

  ScaledPair pair;
  for (std::int64_t n = 1; n < N; ++n) {
    const double t = E - values[static_cast<std::size_t>(n - 1)];
    if (!std::isfinite(t)) throw InputError("shoot: non-finite value");
    pair.step(t);  // now pair.cur = psi_{n+1}
    const std::int64_t idx = n + 1;
    if (idx % stride == 0 || idx == N) {
      const LogValue val = pair.current();
      trace.checkpoints.push_back({idx, val.sign(), val.log_mag()});
    }
  }

  // limsup estimator over the trailing half of the checkpoint list.
  const std::size_t k = trace.checkpoints.size();
  double growth = -std::numeric_limits<double>::infinity();
  for (std::size_t i = k / 2; i < k; ++i) {
    const auto& c = trace.checkpoints[i];
    if (c.sign == 0) continue;
    growth = std::max(growth, c.log_abs / static_cast<double>(c.n));
  }
  trace.growth = growth;
  return trace;
}

ShootingTrace shoot(double E, const PotentialSpec& spec, std::int64_t N) {
  if (N < 2) throw InputError("shoot: N must be >= 2");
  Potential p(spec);
  p.ensure(N - 1);
  const PotentialWindow w = p.window(1, N - 1);
  return shoot(E, w.view(), N);
}

LogValue solution_at(double E, std::span<const double> values, std::int64_t n) {
  if (n < 0) throw InputError("solution_at: n must be >= 0");
  if (n == 0) return {};
  if (n == 1) return LogValue::one();
  if (static_cast<std::int64_t>(values.size()) < n - 1) {
    throw RangeError("solution_at: values must cover v_1 .. v_{n-1}");
  }
  ScaledPair pair;
  for (std::int64_t i = 1; i < n; ++i) {
    const double t = E - values[static_cast<std::size_t>(i - 1)];
    if (!std::isfinite(t)) throw InputError("solution_at: non-finite value");
    pair.step(t);
  }
  return pair.current();
}

IdentityResult green_solution_identity_check(double E, const PotentialSpec& spec,
                                             std::int64_t x, std::int64_t ell,
                                             double tol) {
  if (ell < 1) throw InputError("green_solution_identity_check: ell must be >= 1");
  if (x < 1 || x > ell) {
    throw InputError("green_solution_identity_check: need 1 <= x <= ell");
  }
  Potential p(spec);
  p.ensure(ell);
  const PotentialWindow w = p.window(1, ell);
  const std::span<const double> v = w.view();

  const double dist = dist_to_spectrum(v, E);
  if (dist <= singular_tolerance(v)) {
    throw NearSingularError("green_solution_identity_check: E within tolerance of the spectrum",
                            dist);
  }
  const LogValue psi_end = solution_at(E, v, ell + 1);
  if (psi_end.is_zero()) {
    // psi_{ell+1} = 0 means E is a Dirichlet eigenvalue of the restriction.
    throw NearSingularError("green_solution_identity_check: psi_{ell+1} = 0", 0.0);
  }
  const LogValue psi_x = solution_at(E, v, x);
  const GreenColumn col = green_column_direct(E, v, ell);
  const double g = col.x[static_cast<std::size_t>(x - 1)];

  const double lhs = psi_x.is_zero() ? -std::numeric_limits<double>::infinity()
                                     : psi_x.log_mag();
  const double rhs = g == 0.0 ? -std::numeric_limits<double>::infinity()
                              : psi_end.log_mag() + std::log(std::fabs(g));
  IdentityResult out;
  if (std::isinf(lhs) && std::isinf(rhs)) {
    out.pass = true;
    out.discrepancy = 0.0;
    return out;
  }
  out.discrepancy =
      std::fabs(lhs - rhs) / std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
  out.pass = out.discrepancy <= tol;
  return out;
}

}  // namespace aperiodic
