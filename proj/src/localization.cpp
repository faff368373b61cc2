#include "aperiodic/localization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aperiodic/errors.hpp"
#include "aperiodic/green.hpp"
#include "aperiodic/parallel.hpp"

namespace aperiodic {

std::vector<std::string> GoodParams::paving_warnings() const {
  std::vector<std::string> out;
  if (!(delta > 0.0 && delta < 1.0)) out.push_back("delta outside (0, 1)");
  if (!(decay > 0.0)) out.push_back("decay rate must be positive");
  if (M < 1) out.push_back("M must be >= 1");
  if (!(delta < std::pow(decay, 10.0))) {
    out.push_back("paving hypothesis delta < decay^10 violated");
  }
  if (!(static_cast<double>(M) > 1.0 / (delta * delta))) {
    out.push_back("paving hypothesis M > delta^-2 violated");
  }
  return out;
}

GoodCheck is_good_window(double E, const PotentialWindow& window,
                         const GoodParams& params, double pair_threshold) {
  if (window.len() != params.M) {
    throw InputError("is_good_window: window length must equal params.M");
  }
  if (params.M < 1) throw InputError("is_good_window: M must be >= 1");
  const std::span<const double> v = window.view();
  const double M = static_cast<double>(params.M);
  const double threshold = pair_threshold < 0.0 ? params.delta * M : pair_threshold;

  GoodCheck out;
  const double dist = dist_to_spectrum(v, E);
  if (dist <= singular_tolerance(v)) {
    out.witness.kind = GoodWitness::Kind::Singular;
    out.witness.log_norm = std::numeric_limits<double>::infinity();
    return out;
  }
  const double log_norm = -std::log(dist);
  if (!(log_norm < params.delta * M)) {
    out.witness.kind = GoodWitness::Kind::Norm;
    out.witness.log_norm = log_norm;
    return out;
  }
  for (std::int64_t k2 = 1; k2 <= params.M; ++k2) {
    // Entries at pair distance <= threshold are exempt; skip columns with
    // no pair to check.
    if (static_cast<double>(std::max(k2 - 1, params.M - k2)) <= threshold) continue;
    const GreenColumn col = green_column_direct(E, v, k2);
    for (std::int64_t k1 = 1; k1 <= params.M; ++k1) {
      const double gap = static_cast<double>(std::llabs(k1 - k2));
      if (!(gap > threshold)) continue;
      const double g = col.x[static_cast<std::size_t>(k1 - 1)];
      const double log_abs = g == 0.0 ? -std::numeric_limits<double>::infinity()
                                      : std::log(std::fabs(g));
      const double bound = -params.decay * gap;
      if (!(log_abs < bound)) {
        out.witness.kind = GoodWitness::Kind::Entry;
        out.witness.k1 = k1;
        out.witness.k2 = k2;
        out.witness.log_abs = log_abs;
        out.witness.log_bound = bound;
        return out;
      }
    }
  }
  out.good = true;
  return out;
}

GoodSetReport good_set(double E, const PotentialSpec& spec, const GoodParams& params,
                       std::int64_t ell, std::int64_t stride, int threads) {
  if (ell < 1) throw InputError("good_set: ell must be >= 1");
  if (stride < 1) throw InputError("good_set: stride must be >= 1");
  GoodSetReport report;
  report.E = E;
  report.params = params;
  report.range_end = ell;
  report.stride = stride;
  if (ell < params.M) {
    report.degenerate = true;  // no complete window fits
    return report;
  }

  Potential pot(spec);
  pot.ensure(ell + params.M - 1);

  std::vector<std::int64_t> starts;
  for (std::int64_t k = 1; k <= ell; k += stride) starts.push_back(k);
  report.evaluated = static_cast<std::int64_t>(starts.size());

  std::vector<std::uint8_t> good(starts.size(), 0);
  parallel_for(static_cast<std::int64_t>(starts.size()), threads, [&](std::int64_t i) {
    const PotentialWindow w = pot.window(starts[static_cast<std::size_t>(i)], params.M);
    good[static_cast<std::size_t>(i)] =
        is_good_window(E, w, params).good ? 1 : 0;
  });
  for (std::size_t i = 0; i < starts.size(); ++i) {
    if (good[i]) report.good_starts.push_back(starts[i]);
  }
  report.density = report.evaluated == 0
                       ? 0.0
                       : static_cast<double>(report.good_starts.size()) /
                             static_cast<double>(report.evaluated);
  return report;
}

IntervalSelection select_disjoint_intervals(const GoodSetReport& report, double c0) {
  if (report.stride != 1) {
    throw InputError("select_disjoint_intervals: report must be computed with stride 1");
  }
  IntervalSelection sel;
  sel.M = report.params.M;
  std::int64_t next_free = 1;
  for (const std::int64_t k : report.good_starts) {
    if (k + sel.M - 1 > report.range_end) break;  // interval must fit in [1, ell]
    if (k < next_free) continue;
    sel.starts.push_back(k);
    next_free = k + sel.M;
  }
  const double covered = static_cast<double>(sel.M) * static_cast<double>(sel.starts.size());
  sel.fraction = report.range_end > 0 ? covered / static_cast<double>(report.range_end) : 0.0;
  sel.success = covered > c0 * static_cast<double>(report.range_end);
  return sel;
}

PavingReport corner_decay(double E, std::span<const double> values, std::int64_t ell,
                          double c0) {
  if (ell < 1) throw InputError("corner_decay: ell must be >= 1");
  if (!(c0 > 0.0 && c0 <= 1.0)) throw InputError("corner_decay: c0 must be in (0, 1]");
  if (static_cast<std::int64_t>(values.size()) < ell) {
    throw RangeError("corner_decay: values must cover ell entries");
  }
  PavingReport report;
  report.E = E;
  report.ell = ell;
  report.c0 = c0;
  report.fitted_rate = std::numeric_limits<double>::quiet_NaN();

  const std::int64_t w = static_cast<std::int64_t>(std::floor(c0 * static_cast<double>(ell) / 10.0));
  report.corner_width = w;
  if (w < 1) {
    report.corner_empty = true;
    report.corner_log_max = std::numeric_limits<double>::quiet_NaN();
    return report;
  }

  const std::span<const double> v = values.first(static_cast<std::size_t>(ell));
  double log_max = -std::numeric_limits<double>::infinity();
  for (std::int64_t y = ell - w + 1; y <= ell; ++y) {
    const std::vector<LogValue> col = green_column_log(E, v, y);
    for (std::int64_t x = 1; x <= w; ++x) {
      const LogValue& g = col[static_cast<std::size_t>(x - 1)];
      if (!g.is_zero()) log_max = std::max(log_max, g.log_mag());
    }
  }
  report.corner_log_max = log_max;
  return report;
}

PavingReport corner_decay(double E, const PotentialSpec& spec, std::int64_t ell,
                          double c0) {
  if (ell < 1) throw InputError("corner_decay: ell must be >= 1");
  Potential pot(spec);
  pot.ensure(ell);
  const PotentialWindow w = pot.window(1, ell);
  return corner_decay(E, w.view(), ell, c0);
}

PavingReport paving_report(double E, const PotentialSpec& spec, const GoodParams& params,
                           std::int64_t ell, double c0, int threads) {
  const GoodSetReport s = good_set(E, spec, params, ell, 1, threads);
  const IntervalSelection sel = select_disjoint_intervals(s, c0);
  PavingReport report = corner_decay(E, spec, ell, c0);
  report.interval_starts = sel.starts;
  report.M = params.M;
  report.covered_fraction = sel.fraction;
  report.selection_ok = sel.success;
  return report;
}

double fit_decay_rate(std::span<const std::pair<std::int64_t, double>> points) {
  if (points.size() < 2) throw InputError("fit_decay_rate: need at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(points.size());
  for (const auto& [ell, y] : points) {
    const double x = static_cast<double>(ell);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw InputError("fit_decay_rate: degenerate abscissae");
  const double slope = (n * sxy - sx * sy) / denom;
  return -slope;
}

BadEnergyResult bad_energy_fraction(const PotentialSpec& spec,
                                    std::span<const double> grid, std::int64_t ell,
                                    double c0, double b_prime, int threads) {
  if (grid.empty()) throw InputError("bad_energy_fraction: empty energy grid");
  if (ell < 1) throw InputError("bad_energy_fraction: ell must be >= 1");
  BadEnergyResult out;
  out.bad.assign(grid.size(), 0);

  const std::int64_t w = static_cast<std::int64_t>(std::floor(c0 * static_cast<double>(ell) / 10.0));
  if (w < 1) {
    out.degenerate = true;
    out.fraction = 0.0;
    return out;
  }

  Potential pot(spec);
  pot.ensure(ell);
  const PotentialWindow win = pot.window(1, ell);
  const std::span<const double> values = win.view();
  const double bound = -b_prime * static_cast<double>(ell);

  parallel_for(static_cast<std::int64_t>(grid.size()), threads, [&](std::int64_t i) {
    const double E = grid[static_cast<std::size_t>(i)];
    bool bad = false;
    try {
      const PavingReport r = corner_decay(E, values, ell, c0);
      bad = !(r.corner_log_max < bound);
    } catch (const NearSingularError&) {
      bad = true;  // an exact eigenvalue hit counts bad
    }
    out.bad[static_cast<std::size_t>(i)] = bad ? 1 : 0;
  });

  std::int64_t count = 0;
  for (const auto b : out.bad) count += b;
  out.fraction = static_cast<double>(count) / static_cast<double>(grid.size());
  return out;
}

}  // namespace aperiodic
