// aperiodic: command-line front end for the library. Emits reproducible
// CSV/JSON artifacts with a self-describing metadata header.

#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "aperiodic/dynamics.hpp"
#include "aperiodic/errors.hpp"
#include "aperiodic/green.hpp"
#include "aperiodic/hull.hpp"
#include "aperiodic/localization.hpp"
#include "aperiodic/parallel.hpp"
#include "aperiodic/potential.hpp"
#include "aperiodic/report.hpp"
#include "aperiodic/transfer.hpp"

namespace {

using namespace aperiodic;

struct CommonOpts {
  std::string potential = "mobius";
  double lambda = 1.0;
  std::uint64_t seed = 0;
  std::string out = "-";
  std::string format = "csv";
  int threads = 0;  // 0 = auto
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--potential", o.potential,
                  "mobius | free | periodic:a,b,... | bernoulli:p,v0,v1[,seed] | "
                  "custom:@file.csv");
  cmd->add_option("--lambda", o.lambda, "coupling multiplier applied to the symbols");
  cmd->add_option("--seed", o.seed, "default seed for bernoulli specs without one");
  cmd->add_option("--out", o.out, "output path ('-' = stdout)");
  cmd->add_option("--format", o.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--threads", o.threads,
                  "worker threads (0 = APERIODIC_THREADS or hardware)");
}

int resolve_threads(const CommonOpts& o) {
  return o.threads >= 1 ? o.threads : default_thread_count();
}

std::string iso_now() {
  const std::time_t t = std::time(nullptr);
  char buf[40];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

// Shared metadata; the timestamp goes last so everything above it is
// deterministic for a fixed configuration.
void stamp(TableWriter& t, const CommonOpts& o, const std::string& command) {
  t.meta("tool", std::string("aperiodic ") + kToolVersion);
  t.meta("command", command);
  t.meta("potential", o.potential);
  t.meta("lambda", o.lambda);
  t.meta("seed", static_cast<std::int64_t>(o.seed));
  t.meta("threads", static_cast<std::int64_t>(resolve_threads(o)));
  t.meta("format", o.format);
}

void emit(const TableWriter& t, const CommonOpts& o) {
  if (o.out == "-") {
    t.write(std::cout, o.format);
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw InputError("cannot open output path '" + o.out + "'");
  t.write(f, o.format);
  if (!f) throw InputError("failed writing output path '" + o.out + "'");
}

std::vector<double> energy_grid(double emin, double emax, std::int64_t epoints) {
  if (epoints < 1) throw InputError("epoints must be >= 1");
  if (!(emin <= emax)) throw InputError("emin must be <= emax");
  std::vector<double> grid(static_cast<std::size_t>(epoints));
  for (std::int64_t i = 0; i < epoints; ++i) {
    grid[static_cast<std::size_t>(i)] =
        epoints == 1 ? emin
                     : emin + (emax - emin) * static_cast<double>(i) /
                           static_cast<double>(epoints - 1);
  }
  return grid;
}

PotentialSpec spec_of(const CommonOpts& o) {
  return PotentialSpec::parse(o.potential, o.lambda, o.seed);
}

std::int64_t spec_seed(const PotentialSpec& s) {
  return s.kind == PotentialSpec::Kind::Bernoulli ? static_cast<std::int64_t>(s.seed) : 0;
}

// ---------------------------------------------------------------- sweep

int run_sweep(const CommonOpts& o, double emin, double emax, std::int64_t epoints,
              std::int64_t N, std::int64_t shifts) {
  const PotentialSpec spec = spec_of(o);
  const auto grid = energy_grid(emin, emax, epoints);
  const LyapunovCurve curve = lyapunov_curve(spec, grid, N, shifts, resolve_threads(o));

  TableWriter t({"energy", "gamma", "N", "shifts", "potential", "lambda", "seed"});
  stamp(t, o, "sweep");
  t.meta("emin", emin);
  t.meta("emax", emax);
  t.meta("epoints", epoints);
  t.meta("N", N);
  t.meta("shifts", shifts);
  t.meta("timestamp", iso_now());
  for (std::size_t i = 0; i < curve.energies.size(); ++i) {
    t.row({curve.energies[i], curve.gamma[i], N, shifts, spec.to_string(), spec.lambda,
           spec_seed(spec)});
  }
  emit(t, o);
  return 0;
}

// ----------------------------------------------------------------- grow

int run_grow(const CommonOpts& o, double E, std::int64_t N) {
  const PotentialSpec spec = spec_of(o);
  const ShootingTrace trace = shoot(E, spec, N);

  TableWriter t({"n", "sign", "log_abs_psi"});
  stamp(t, o, "grow");
  t.meta("E", E);
  t.meta("N", N);
  t.meta("growth", trace.growth);
  t.meta("timestamp", iso_now());
  for (const auto& c : trace.checkpoints) {
    t.row({c.n, static_cast<std::int64_t>(c.sign), c.log_abs});
  }
  // summary row: n = -1 carries the growth estimate
  t.row({static_cast<std::int64_t>(-1), static_cast<std::int64_t>(0), trace.growth});
  emit(t, o);
  return 0;
}

// ---------------------------------------------------------------- green

int run_green(const CommonOpts& o, double E, std::int64_t N, std::int64_t start,
              std::int64_t k1, std::int64_t k2, std::int64_t column,
              const std::string& method) {
  const PotentialSpec spec = spec_of(o);
  Potential pot(spec);
  pot.ensure(start + N - 1);
  const PotentialWindow w = pot.window(start, N);
  const std::span<const double> v = w.view();

  TableWriter t({"k1", "k2", "log_abs_G", "sign", "method"});
  stamp(t, o, "green");
  t.meta("E", E);
  t.meta("N", N);
  t.meta("start", start);
  t.meta("method", method);
  t.meta("timestamp", iso_now());

  const auto row_of = [&](std::int64_t a, std::int64_t b, const LogValue& val,
                          const char* m) {
    t.row({a, b, val.log_mag(), static_cast<std::int64_t>(val.sign()), std::string(m)});
  };

  if (column > 0) {
    if (column > N) throw InputError("green: --column out of range");
    const GreenColumn col = green_column_direct(E, v, column);
    for (std::int64_t i = 1; i <= N; ++i) {
      row_of(i, column, LogValue::from_double(col.x[static_cast<std::size_t>(i - 1)]),
             "direct");
    }
  } else {
    if (k1 < 1 || k2 < 1) throw InputError("green: provide --k1 and --k2, or --column");
    if (method == "cramer") {
      const LogValue mag = green_entry_cramer(E, v, std::min(k1, k2), std::max(k1, k2));
      // magnitude from the determinant route, sign filled by the direct solver
      const GreenColumn col = green_column_direct(E, v, k2);
      const double d = col.x[static_cast<std::size_t>(k1 - 1)];
      const int sign = d > 0 ? 1 : (d < 0 ? -1 : 0);
      row_of(k1, k2, LogValue(sign == 0 ? mag.sign() : sign, mag.log_mag()), "cramer");
    } else {
      const GreenColumn col = green_column_direct(E, v, k2);
      row_of(k1, k2, LogValue::from_double(col.x[static_cast<std::size_t>(k1 - 1)]),
             "direct");
    }
  }
  emit(t, o);
  return 0;
}

// -------------------------------------------------------------- density

int run_density(const CommonOpts& o, double emin, double emax, std::int64_t epoints,
                std::int64_t M, double delta, double b, std::int64_t ell,
                std::int64_t stride) {
  const PotentialSpec spec = spec_of(o);
  const auto grid = energy_grid(emin, emax, epoints);
  const GoodParams params{delta, b, M};

  TableWriter t({"energy", "density", "M", "delta", "b", "ell"});
  stamp(t, o, "density");
  t.meta("emin", emin);
  t.meta("emax", emax);
  t.meta("epoints", epoints);
  t.meta("M", M);
  t.meta("delta", delta);
  t.meta("b", b);
  t.meta("ell", ell);
  t.meta("stride", stride);
  for (const auto& warning : params.paving_warnings()) t.meta("warning", warning);
  t.meta("timestamp", iso_now());

  for (const double E : grid) {
    const GoodSetReport r = good_set(E, spec, params, ell, stride, resolve_threads(o));
    t.row({E, r.density, M, delta, b, ell});
  }
  emit(t, o);
  return 0;
}

// --------------------------------------------------------------- paving

int run_paving(const CommonOpts& o, double E, std::vector<std::int64_t> ells, double c0,
               std::int64_t M, double delta, double b) {
  const PotentialSpec spec = spec_of(o);
  const GoodParams params{delta, b, M};

  nlohmann::json j;
  j["meta"] = {{"tool", std::string("aperiodic ") + kToolVersion},
               {"command", "paving"},
               {"potential", o.potential},
               {"lambda", o.lambda},
               {"E", E},
               {"c0", c0},
               {"M", M},
               {"delta", delta},
               {"b", b},
               {"timestamp", iso_now()}};
  j["reports"] = nlohmann::json::array();

  std::vector<std::pair<std::int64_t, double>> pairs;
  for (const std::int64_t ell : ells) {
    const PavingReport r = paving_report(E, spec, params, ell, c0, resolve_threads(o));
    nlohmann::json jr = {{"E", r.E},
                         {"ell", r.ell},
                         {"c0", r.c0},
                         {"M", r.M},
                         {"interval_starts", r.interval_starts},
                         {"covered_fraction", r.covered_fraction},
                         {"selection_ok", r.selection_ok},
                         {"corner_width", r.corner_width},
                         {"corner_empty", r.corner_empty},
                         {"corner_log_max",
                          r.corner_empty ? nlohmann::json() : nlohmann::json(r.corner_log_max)}};
    j["reports"].push_back(std::move(jr));
    if (!r.corner_empty) pairs.emplace_back(r.ell, r.corner_log_max);
  }
  if (pairs.size() >= 2) {
    j["fitted_rate"] = fit_decay_rate(pairs);
  }

  TableWriter rates({"ell", "corner_log_max"});
  stamp(rates, o, "paving");
  rates.meta("E", E);
  rates.meta("c0", c0);
  rates.meta("timestamp", iso_now());
  for (const auto& [ell, lm] : pairs) rates.row({ell, lm});

  if (o.out == "-") {
    std::cout << j.dump(2) << "\n";
    rates.write_csv(std::cout);
  } else {
    std::ofstream f(o.out);
    if (!f) throw InputError("cannot open output path '" + o.out + "'");
    f << j.dump(2) << "\n";
    std::ofstream fr(o.out + ".rates.csv");
    if (!fr) throw InputError("cannot open output path '" + o.out + ".rates.csv'");
    rates.write_csv(fr);
  }
  return 0;
}

// --------------------------------------------------------------- mobius

int run_mobius(const CommonOpts& o, std::int64_t nmax) {
  const auto mu = mobius_sieve(nmax);
  TableWriter t({"n", "mu"});
  stamp(t, o, "mobius");
  t.meta("nmax", nmax);
  t.meta("timestamp", iso_now());
  for (std::int64_t n = 1; n <= nmax; ++n) {
    t.row({n, static_cast<std::int64_t>(mu[static_cast<std::size_t>(n)])});
  }
  emit(t, o);
  return 0;
}

// ------------------------------------------------------------- patterns

std::string word_text(const std::vector<double>& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ' ';
    s += fmt17(w[i]);
  }
  return s;
}

int run_patterns(const CommonOpts& o, const std::string& word_str,
                 const std::string& period_str, std::int64_t rmax, std::int64_t N,
                 std::int64_t nmax) {
  const PotentialSpec spec = spec_of(o);
  if (nmax <= 0) nmax = N + std::max<std::int64_t>(rmax, 8) + 1;
  const SymbolSequence seq = SymbolSequence::from_potential(spec, nmax);

  TableWriter t({"word", "r", "N", "count", "frequency"});
  stamp(t, o, "patterns");
  t.meta("N", N);
  t.meta("nmax", nmax);
  t.meta("timestamp", iso_now());

  const auto parse_word = [](const std::string& s) {
    std::vector<double> w;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) w.push_back(std::stod(item));
    if (w.empty()) throw InputError("patterns: empty word");
    return w;
  };

  if (!period_str.empty()) {
    const auto period = parse_word(period_str);
    std::vector<std::int64_t> rs;
    for (std::int64_t r = 0; r <= rmax; ++r) rs.push_back(r);
    for (const auto& [r, freq] : periodic_word_decay(seq, period, rs, N)) {
      std::vector<double> w(static_cast<std::size_t>(r + 1));
      for (std::int64_t i = 0; i <= r; ++i)
        w[static_cast<std::size_t>(i)] =
            period[static_cast<std::size_t>(i % static_cast<std::int64_t>(period.size()))];
      const std::int64_t count =
          static_cast<std::int64_t>(std::llround(freq * static_cast<double>(N)));
      t.row({word_text(w), r, N, count, freq});
    }
  } else {
    const auto w = parse_word(word_str);
    const std::int64_t count = pattern_count(seq, w, N);
    t.row({word_text(w), static_cast<std::int64_t>(w.size()) - 1, N, count,
           static_cast<double>(count) / static_cast<double>(N)});
  }
  emit(t, o);
  return 0;
}

// ------------------------------------------------------------- selftest

struct TestRng {
  std::uint64_t state;
  explicit TestRng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() { return splitmix64(state++); }
  double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }
  std::int64_t index(std::int64_t lo, std::int64_t hi) {  // inclusive
    return lo + static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
};

int run_selftest() {
  bool all_ok = true;

  {  // transfer product vs determinant recurrences
    TestRng rng(20240601);
    bool ok = true;
    double worst = 0.0;
    for (int c = 0; c < 60; ++c) {
      const double E = rng.uniform(-4.0, 4.0);
      const std::int64_t n = rng.index(2, 64);
      std::vector<double> v(static_cast<std::size_t>(n));
      for (auto& x : v) x = rng.u01() < 0.5 ? 1.0 : -1.0;
      const IdentityCheck chk = verify_transfer_det_identity(E, v, 1e-9);
      worst = std::max(worst, chk.max_discrepancy);
      ok = ok && chk.pass;
    }
    std::cout << (ok ? "[PASS]" : "[FAIL]")
              << " transfer/determinant identity (60 cases, worst " << fmt17(worst)
              << ")\n";
    all_ok = all_ok && ok;
  }

  {  // Cramer vs direct Green route
    TestRng rng(20240602);
    bool ok = true;
    double worst = 0.0;
    for (int c = 0; c < 30; ++c) {
      const std::int64_t n = rng.index(2, 256);
      std::vector<double> v(static_cast<std::size_t>(n));
      for (auto& x : v) x = rng.u01() < 0.5 ? 1.5 : -1.5;
      double E = 0.0;
      for (int tries = 0; tries < 100; ++tries) {
        E = rng.uniform(-4.0, 4.0);
        if (dist_to_spectrum(v, E) >= 1e-6) break;
      }
      const std::int64_t k2 = rng.index(1, n);
      const std::int64_t k1 = rng.index(1, k2);
      const LogValue cramer = green_entry_cramer(E, v, k1, k2);
      const GreenColumn col = green_column_direct(E, v, k2);
      const double direct = col.x[static_cast<std::size_t>(k1 - 1)];
      if (cramer.is_zero() && direct == 0.0) continue;
      if (std::fabs(direct) < 1e-300) continue;
      const double diff = std::fabs(cramer.log_mag() - std::log(std::fabs(direct)));
      worst = std::max(worst, diff);
      ok = ok && diff < 1e-6;
    }
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " Cramer vs direct Green route "
              << "(30 cases, worst " << fmt17(worst) << ")\n";
    all_ok = all_ok && ok;
  }

  {  // free-potential Lyapunov oracle
    bool ok = true;
    double worst = 0.0;
    const std::vector<double> zeros(100000, 0.0);
    for (int i = 0; i <= 20; ++i) {
      const double E = -4.0 + 8.0 * i / 20.0;
      const double got = lyapunov_estimate(E, zeros);
      const double want = free_gamma_closed_form(E);
      worst = std::max(worst, std::fabs(got - want));
      ok = ok && std::fabs(got - want) < 1e-3;
    }
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " free-potential Lyapunov oracle "
              << "(21 energies, worst " << fmt17(worst) << ")\n";
    all_ok = all_ok && ok;
  }

  std::cout << (all_ok ? "selftest: all suites passed\n" : "selftest: FAILURES\n");
  return all_ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical toolkit for 1D discrete Schrodinger operators with "
               "aperiodic potentials"};
  app.require_subcommand(1);

  CommonOpts common;

  // sweep
  double emin = -4.0, emax = 4.0;
  std::int64_t epoints = 9, N = 100000, shifts = 1;
  auto* sweep = app.add_subcommand("sweep", "Lyapunov exponent over an energy grid");
  add_common(sweep, common);
  sweep->add_option("--emin", emin);
  sweep->add_option("--emax", emax);
  sweep->add_option("--epoints", epoints);
  sweep->add_option("--N", N, "transfer steps per window");
  sweep->add_option("--shifts", shifts, "non-overlapping windows to average");

  // grow
  double E = 0.5;
  auto* grow = app.add_subcommand("grow", "forward-shooting solution checkpoints");
  add_common(grow, common);
  grow->add_option("--E", E)->required();
  grow->add_option("--N", N, "final solution index");

  // green
  std::int64_t start = 1, k1 = 0, k2 = 0, column = 0;
  std::string method = "direct";
  auto* green = app.add_subcommand("green", "restricted Green's function entries");
  add_common(green, common);
  green->add_option("--E", E)->required();
  green->add_option("--N", N, "window length");
  green->add_option("--start", start, "window start position");
  green->add_option("--k1", k1);
  green->add_option("--k2", k2);
  green->add_option("--column", column, "emit the whole column at this index");
  green->add_option("--method", method)->check(CLI::IsMember({"cramer", "direct"}));

  // density
  std::int64_t M = 50, ell = 1000, stride = 1;
  double delta = 0.01, b = 0.1;
  auto* density = app.add_subcommand("density", "good-window density over a grid");
  add_common(density, common);
  density->add_option("--emin", emin);
  density->add_option("--emax", emax);
  density->add_option("--epoints", epoints);
  density->add_option("--M", M, "window length");
  density->add_option("--delta", delta);
  density->add_option("--b", b, "off-diagonal decay rate");
  density->add_option("--ell", ell);
  density->add_option("--stride", stride);

  // paving
  std::vector<std::int64_t> ells{1000, 2000, 4000};
  double c0 = 0.5;
  auto* paving = app.add_subcommand("paving", "interval selection and corner decay");
  add_common(paving, common);
  paving->add_option("--E", E)->required();
  paving->add_option("--ells", ells, "interval lengths")->delimiter(',');
  paving->add_option("--c0", c0, "covering fraction");
  paving->add_option("--M", M);
  paving->add_option("--delta", delta);
  paving->add_option("--b", b);

  // mobius
  std::int64_t nmax = 100;
  auto* mobius = app.add_subcommand("mobius", "dump the Moebius sieve");
  add_common(mobius, common);
  mobius->add_option("--nmax", nmax)->required();

  // patterns
  std::string word_str = "0", period_str;
  std::int64_t rmax = 8, seq_nmax = 0;
  auto* patterns = app.add_subcommand("patterns", "pattern frequency statistics");
  add_common(patterns, common);
  patterns->add_option("--word", word_str, "comma-separated symbols");
  patterns->add_option("--period-word", period_str,
                       "periodic word for the decay table (overrides --word)");
  patterns->add_option("--rmax", rmax, "largest r for the decay table");
  patterns->add_option("--N", N, "window positions counted");
  patterns->add_option("--nmax", seq_nmax, "sequence length (0 = N + rmax + 1)");

  // selftest
  auto* selftest = app.add_subcommand("selftest", "run the built-in numeric checks");
  (void)selftest;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (sweep->parsed()) return run_sweep(common, emin, emax, epoints, N, shifts);
    if (grow->parsed()) return run_grow(common, E, N);
    if (green->parsed()) return run_green(common, E, N, start, k1, k2, column, method);
    if (density->parsed())
      return run_density(common, emin, emax, epoints, M, delta, b, ell, stride);
    if (paving->parsed()) return run_paving(common, E, ells, c0, M, delta, b);
    if (mobius->parsed()) return run_mobius(common, nmax);
    if (patterns->parsed())
      return run_patterns(common, word_str, period_str, rmax, N, seq_nmax);
    if (selftest->parsed()) return run_selftest();
  } catch (const NearSingularError& e) {
    std::cerr << "numerical degeneracy: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const RangeError& e) {
    std::cerr << "range error: " << e.what() << "\n";
    return 1;
  } catch (const SizeError& e) {
    std::cerr << "size error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
