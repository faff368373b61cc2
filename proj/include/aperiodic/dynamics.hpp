#ifndef APERIODIC_DYNAMICS_HPP
#define APERIODIC_DYNAMICS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "aperiodic/log_value.hpp"
#include "aperiodic/potential.hpp"

namespace aperiodic {

// (1/N) * log||transfer product over the window||_2, clamped to >= 0
// (determinant-1 products have norm >= 1; the clamp removes roundoff dips).
double lyapunov_estimate(double E, std::span<const double> values);
double lyapunov_estimate(double E, const PotentialSpec& spec, std::int64_t N,
                         std::int64_t start = 1);

// Average of lyapunov_estimate over `shifts` non-overlapping windows
// [1 + i*N, 1 + (i+1)*N); the computable stand-in for the invariant-measure
// average. full_values must cover shifts * N entries starting at index 1.
double birkhoff_lyapunov(double E, std::span<const double> full_values,
                         std::int64_t N, std::int64_t shifts);
double birkhoff_lyapunov(double E, const PotentialSpec& spec, std::int64_t N,
                         std::int64_t shifts);

// Zero-potential oracle: 0 for |E| <= 2, log((|E| + sqrt(E^2 - 4)) / 2) outside.
double free_gamma_closed_form(double E);

struct LyapunovCurve {
  std::vector<double> energies;
  std::vector<double> gamma;
  std::int64_t N = 0;
  std::int64_t shifts = 1;
  PotentialSpec spec;
};

// Energy sweep, parallel over grid points; row order follows the grid.
LyapunovCurve lyapunov_curve(const PotentialSpec& spec,
                             std::span<const double> energies, std::int64_t N,
                             std::int64_t shifts, int threads = 1);

// Forward shooting of psi_{n+1} = (E - v_n) psi_n - psi_{n-1} from
// psi_0 = 0, psi_1 = 1, in power-of-2 scaled form.
struct ShootingTrace {
  struct Checkpoint {
    std::int64_t n = 0;
    int sign = 0;
    double log_abs = 0.0;  // -inf when sign == 0
  };

  double E = 0.0;
  double psi0 = 0.0;
  double psi1 = 1.0;
  std::vector<Checkpoint> checkpoints;
  double growth = 0.0;  // max of log|psi_n| / n over the trailing half
};

// values must cover v_1 .. v_{N-1}. Checkpoint stride is ceil(N / 1024)
// rounded up to odd, so that period-2 solutions are sampled at both
// parities; the final index N is always recorded.
ShootingTrace shoot(double E, std::span<const double> values, std::int64_t N);
ShootingTrace shoot(double E, const PotentialSpec& spec, std::int64_t N);

// psi_n in sign/log form; values must cover v_1 .. v_{n-1}.
LogValue solution_at(double E, std::span<const double> values, std::int64_t n);

// Checks psi_x = -psi_{ell+1} * G_{[1,ell]}(E)(x, ell) by comparing
// log|psi_x| against log|psi_{ell+1}| + log|G(x, ell)|, the two sides
// computed by independent routes (shooting vs direct tridiagonal solve).
struct IdentityResult {
  bool pass = false;
  double discrepancy = 0.0;  // relative log discrepancy
};
IdentityResult green_solution_identity_check(double E, const PotentialSpec& spec,
                                             std::int64_t x, std::int64_t ell,
                                             double tol);

}  // namespace aperiodic

#endif
