#ifndef APERIODIC_LOCALIZATION_HPP
#define APERIODIC_LOCALIZATION_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "aperiodic/potential.hpp"

namespace aperiodic {

// Window-quality parameters: norm bound e^{delta*M}, off-diagonal decay
// rate `decay` (the rate c1), window length M.
struct GoodParams {
  double delta = 0.01;
  double decay = 0.1;
  std::int64_t M = 50;

  // Non-fatal hypothesis checks for paving use: delta < decay^10 and
  // M > delta^-2. Returns human-readable warnings, empty when satisfied.
  std::vector<std::string> paving_warnings() const;
};

// Failure evidence for is_good_window; every witness can be re-verified
// independently.
struct GoodWitness {
  enum class Kind { None, Singular, Norm, Entry };
  Kind kind = Kind::None;
  double log_norm = 0.0;     // Norm/Singular: log of the resolvent norm (inf if singular)
  std::int64_t k1 = 0;       // Entry: violating pair (window-local, 1-based)
  std::int64_t k2 = 0;
  double log_abs = 0.0;      // Entry: log|G(k1, k2)|
  double log_bound = 0.0;    // Entry: the violated bound -decay * |k1 - k2|
};

struct GoodCheck {
  bool good = false;
  GoodWitness witness;
};

// True iff the resolvent norm is < e^{delta*M} and every Green's entry at
// pair distance > pair_threshold (default delta*M) obeys
// |G(k1,k2)| < e^{-decay*|k1-k2|}. Entries come from M direct column
// solves. A window whose spectrum contains E is never good.
GoodCheck is_good_window(double E, const PotentialWindow& window,
                         const GoodParams& params, double pair_threshold = -1.0);

struct GoodSetReport {
  double E = 0.0;
  GoodParams params;
  std::int64_t range_end = 0;  // ell
  std::int64_t stride = 1;
  std::int64_t evaluated = 0;
  std::vector<std::int64_t> good_starts;  // ascending
  double density = 0.0;  // |good_starts| / evaluated; equals |S cap [1,ell]| / ell at stride 1
  bool degenerate = false;  // ell < M: no complete window fits
};

// Evaluates is_good_window at starts k = 1, 1+stride, ... <= ell; windows
// [k, k+M) may extend past ell, so the sequence is materialized up to
// ell + M - 1. Parallel over starts, result independent of thread count.
GoodSetReport good_set(double E, const PotentialSpec& spec, const GoodParams& params,
                       std::int64_t ell, std::int64_t stride = 1, int threads = 1);

struct IntervalSelection {
  bool success = false;
  std::vector<std::int64_t> starts;  // each interval is [k, k+M)
  std::int64_t M = 0;
  double fraction = 0.0;  // selected length / ell
};

// Greedy left-to-right selection of disjoint good M-windows contained in
// [1, ell]; succeeds iff the selected length exceeds c0 * ell. Greedy is
// optimal for equal-length windows.
IntervalSelection select_disjoint_intervals(const GoodSetReport& report, double c0);

struct PavingReport {
  double E = 0.0;
  std::int64_t ell = 0;
  double c0 = 0.5;
  // Interval selection (filled by paving_report, empty from corner_decay).
  std::vector<std::int64_t> interval_starts;
  std::int64_t M = 0;
  double covered_fraction = 0.0;
  bool selection_ok = false;
  // Corner block of G_{[1,ell]}: x in [1, w], y in [ell-w+1, ell] with
  // w = floor(c0 * ell / 10).
  std::int64_t corner_width = 0;
  bool corner_empty = false;
  double corner_log_max = 0.0;  // NaN when corner_empty
  double fitted_rate = 0.0;     // NaN unless filled by fit_decay_rate user
};

// Corner block of the length-ell restricted Green's function via
// corner-width log-scaled column solves. Throws NearSingularError when E
// is an exact eigenvalue of the restriction.
PavingReport corner_decay(double E, std::span<const double> values, std::int64_t ell,
                          double c0);
PavingReport corner_decay(double E, const PotentialSpec& spec, std::int64_t ell,
                          double c0);

// Full pipeline at one (E, ell): good set (stride 1), interval selection,
// corner block.
PavingReport paving_report(double E, const PotentialSpec& spec, const GoodParams& params,
                           std::int64_t ell, double c0, int threads = 1);

// Least-squares slope of corner_log_max against ell, negated (the decay
// rate b' estimate).
double fit_decay_rate(std::span<const std::pair<std::int64_t, double>> points);

struct BadEnergyResult {
  double fraction = 0.0;
  bool degenerate = false;          // empty corner region at this ell
  std::vector<std::uint8_t> bad;    // per-grid-point flags
};

// Fraction of grid energies whose corner_log_max >= -b_prime * ell;
// singular energies count bad. Grid surrogate for the bad-energy measure.
BadEnergyResult bad_energy_fraction(const PotentialSpec& spec,
                                    std::span<const double> grid, std::int64_t ell,
                                    double c0, double b_prime, int threads = 1);

}  // namespace aperiodic

#endif
