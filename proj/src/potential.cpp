#include "aperiodic/potential.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "aperiodic/errors.hpp"

namespace aperiodic {

namespace {

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  if (n % 3 == 0) return n == 3;
  for (std::int64_t f = 5; f * f <= n; f += 6) {
    if (n % f == 0 || n % (f + 2) == 0) return false;
  }
  return true;
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
  // extended Euclid; gcd(a, m) must be 1
  std::int64_t old_r = a, r = m;
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::int64_t tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  std::int64_t inv = old_s % m;
  if (inv < 0) inv += m;
  return inv;
}

double bernoulli_omega(const PotentialSpec& spec, std::int64_t n) {
  const std::uint64_t h =
      splitmix64(spec.seed ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(n)));
  const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
  return u < spec.prob ? spec.value0 : spec.value1;
}

std::vector<double> parse_number_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(item, &pos);
      while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
      if (pos != item.size()) throw InputError("");
      out.push_back(v);
    } catch (const std::exception&) {
      throw InputError(std::string(what) + ": cannot parse number '" + item + "'");
    }
  }
  return out;
}

std::string join_numbers(const std::vector<double>& values) {
  std::string out;
  char buf[40];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", values[i]);
    if (i) out += ',';
    out += buf;
  }
  return out;
}

int distinct_count(const std::vector<double>& values) {
  std::set<double> s(values.begin(), values.end());
  return static_cast<int>(s.size());
}

}  // namespace

std::vector<std::int8_t> mobius_sieve(std::int64_t n_max) {
  if (n_max < 1) throw SizeError("mobius_sieve: n_max must be >= 1");
  if (n_max > kMaxSieveLength) {
    throw SizeError("mobius_sieve: n_max exceeds the sieve cap of " +
                    std::to_string(kMaxSieveLength));
  }
  const std::size_t n = static_cast<std::size_t>(n_max);
  std::vector<std::int8_t> mu(n + 1, 0);
  std::vector<bool> composite(n + 1, false);
  std::vector<std::int32_t> primes;
  primes.reserve(n_max > 100 ? static_cast<std::size_t>(1.3 * n_max / std::log(double(n_max)))
                             : 32);
  mu[1] = 1;
  for (std::int64_t i = 2; i <= n_max; ++i) {
    if (!composite[i]) {
      primes.push_back(static_cast<std::int32_t>(i));
      mu[i] = -1;
    }
    for (const std::int32_t p : primes) {
      const std::int64_t ip = i * p;
      if (ip > n_max) break;
      composite[ip] = true;
      if (i % p == 0) {
        mu[ip] = 0;  // p^2 divides ip
        break;
      }
      mu[ip] = static_cast<std::int8_t>(-mu[i]);
    }
  }
  return mu;
}

ApZero ap_zero_search(std::int64_t k, std::int64_t n, std::int64_t d) {
  if (k < 0) throw InputError("ap_zero_search: k must be >= 0");
  if (n < 1) throw InputError("ap_zero_search: n must be >= 1");
  if (d < 1) throw InputError("ap_zero_search: d must be >= 1");
  if (d > (std::int64_t{1} << 20)) {
    throw SizeError("ap_zero_search: d too large, p^2*d would overflow");
  }
  const std::int64_t target = k + n;  // k >= 0, n >= 1: no overflow concern at these caps
  for (std::int64_t p = d + 1; p < 10 * d; ++p) {
    if (!is_prime(p)) continue;
    const std::int64_t p2 = p * p;
    // p > d makes d invertible mod p^2: the congruence has a unique root.
    const std::int64_t dinv = mod_inverse(d % p2, p2);
    const std::int64_t rem = target % p2;
    const std::int64_t need = (p2 - rem) % p2;  // j*d == need (mod p^2)
    const std::int64_t j = static_cast<std::int64_t>(
        (static_cast<unsigned __int128>(need) * static_cast<unsigned __int128>(dinv)) %
        static_cast<unsigned __int128>(p2));
    const unsigned __int128 value = static_cast<unsigned __int128>(target) +
                                    static_cast<unsigned __int128>(j) *
                                        static_cast<unsigned __int128>(d);
    if (value > static_cast<unsigned __int128>(INT64_MAX)) {
      throw SizeError("ap_zero_search: k + n + j*d overflows");
    }
    return {p, j};
  }
  // A prime always exists in (d, 2d] for d >= 1, so this is unreachable.
  throw std::logic_error("ap_zero_search: no prime in (d, 10d)");
}

PotentialSpec PotentialSpec::mobius(double lambda) {
  PotentialSpec s;
  s.kind = Kind::Mobius;
  s.lambda = lambda;
  s.validate();
  return s;
}

PotentialSpec PotentialSpec::free() {
  PotentialSpec s;
  s.kind = Kind::Free;
  s.lambda = 0.0;
  return s;
}

PotentialSpec PotentialSpec::periodic(std::vector<double> word, double lambda) {
  PotentialSpec s;
  s.kind = Kind::Periodic;
  s.word = std::move(word);
  s.lambda = lambda;
  s.validate();
  return s;
}

PotentialSpec PotentialSpec::bernoulli(double prob, double value0, double value1,
                                       std::uint64_t seed, double lambda) {
  PotentialSpec s;
  s.kind = Kind::Bernoulli;
  s.prob = prob;
  s.value0 = value0;
  s.value1 = value1;
  s.seed = seed;
  s.lambda = lambda;
  s.validate();
  return s;
}

PotentialSpec PotentialSpec::custom(std::vector<double> data, double lambda) {
  PotentialSpec s;
  s.kind = Kind::Custom;
  s.data = std::move(data);
  s.lambda = lambda;
  s.validate();
  return s;
}

void PotentialSpec::validate() const {
  if (kind != Kind::Free && (lambda == 0.0 || !std::isfinite(lambda))) {
    throw InputError("potential: lambda must be nonzero and finite");
  }
  switch (kind) {
    case Kind::Periodic:
      if (word.empty()) throw InputError("potential: periodic word is empty");
      for (double v : word)
        if (!std::isfinite(v)) throw InputError("potential: non-finite word value");
      break;
    case Kind::Bernoulli:
      if (!(prob >= 0.0 && prob <= 1.0)) {
        throw InputError("potential: bernoulli prob must be in [0, 1]");
      }
      if (!std::isfinite(value0) || !std::isfinite(value1)) {
        throw InputError("potential: non-finite bernoulli value");
      }
      break;
    case Kind::Custom:
      if (data.empty()) throw InputError("potential: custom data is empty");
      for (double v : data)
        if (!std::isfinite(v)) throw InputError("potential: non-finite custom value");
      break;
    default:
      break;
  }
}

PotentialSpec PotentialSpec::parse(const std::string& text, double lambda,
                                   std::uint64_t default_seed) {
  const std::size_t colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string tail = colon == std::string::npos ? "" : text.substr(colon + 1);

  if (head == "mobius" || head == "moebius") {
    if (!tail.empty()) throw InputError("potential: 'mobius' takes no arguments");
    return mobius(lambda);
  }
  if (head == "free") {
    if (!tail.empty()) throw InputError("potential: 'free' takes no arguments");
    return free();
  }
  if (head == "periodic") {
    return periodic(parse_number_list(tail, "periodic"), lambda);
  }
  if (head == "bernoulli") {
    const auto nums = parse_number_list(tail, "bernoulli");
    if (nums.size() != 3 && nums.size() != 4) {
      throw InputError("potential: bernoulli needs p,v0,v1[,seed]");
    }
    const std::uint64_t seed =
        nums.size() == 4 ? static_cast<std::uint64_t>(nums[3]) : default_seed;
    return bernoulli(nums[0], nums[1], nums[2], seed, lambda);
  }
  if (head == "custom") {
    if (tail.empty() || tail[0] != '@') {
      throw InputError("potential: custom form is custom:@file.csv");
    }
    std::ifstream in(tail.substr(1));
    if (!in) throw InputError("potential: cannot open '" + tail.substr(1) + "'");
    std::vector<double> data;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      try {
        data.push_back(std::stod(line));
      } catch (const std::exception&) {
        throw InputError("potential: bad line in custom file: '" + line + "'");
      }
    }
    return custom(std::move(data), lambda);
  }
  throw InputError("potential: unknown kind '" + head + "'");
}

std::string PotentialSpec::to_string() const {
  switch (kind) {
    case Kind::Mobius:
      return "mobius";
    case Kind::Free:
      return "free";
    case Kind::Periodic:
      return "periodic:" + join_numbers(word);
    case Kind::Bernoulli: {
      char buf[128];
      std::snprintf(buf, sizeof(buf), "bernoulli:%.17g,%.17g,%.17g,%llu", prob, value0,
                    value1, static_cast<unsigned long long>(seed));
      return buf;
    }
    case Kind::Custom:
      return "custom:<" + std::to_string(data.size()) + " values>";
  }
  return "?";
}

int PotentialSpec::alphabet_bound() const {
  switch (kind) {
    case Kind::Mobius:
      return 3;
    case Kind::Free:
      return 1;
    case Kind::Periodic:
      return distinct_count(word);
    case Kind::Bernoulli:
      return value0 == value1 ? 1 : 2;
    case Kind::Custom:
      return distinct_count(data);
  }
  return 0;
}

Potential::Potential(PotentialSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

void Potential::ensure(std::int64_t n_max) {
  if (n_max < 1) throw InputError("Potential::ensure: n_max must be >= 1");
  if (spec_.kind == PotentialSpec::Kind::Mobius &&
      static_cast<std::int64_t>(mu_.size()) < n_max + 1) {
    mu_ = mobius_sieve(n_max);
  }
}

double Potential::omega(std::int64_t n) const {
  if (n < 1) throw RangeError("Potential::omega: index must be >= 1");
  switch (spec_.kind) {
    case PotentialSpec::Kind::Mobius:
      if (n >= static_cast<std::int64_t>(mu_.size())) {
        throw RangeError("Potential::omega: sieve not built this far, call ensure()");
      }
      return static_cast<double>(mu_[static_cast<std::size_t>(n)]);
    case PotentialSpec::Kind::Free:
      return 0.0;
    case PotentialSpec::Kind::Periodic:
      return spec_.word[static_cast<std::size_t>((n - 1) %
                                                 static_cast<std::int64_t>(spec_.word.size()))];
    case PotentialSpec::Kind::Bernoulli:
      return bernoulli_omega(spec_, n);
    case PotentialSpec::Kind::Custom:
      if (n > static_cast<std::int64_t>(spec_.data.size())) {
        throw RangeError("Potential::omega: index past the custom data");
      }
      return spec_.data[static_cast<std::size_t>(n - 1)];
  }
  throw InputError("Potential::omega: bad kind");
}

PotentialWindow Potential::window(std::int64_t start, std::int64_t len) const {
  if (start < 1) throw InputError("Potential::window: start must be >= 1");
  if (len < 1) throw InputError("Potential::window: len must be >= 1");
  PotentialWindow w;
  w.start = start;
  w.alphabet_bound = spec_.alphabet_bound();
  w.values.resize(static_cast<std::size_t>(len));
  const double lambda = spec_.kind == PotentialSpec::Kind::Free ? 0.0 : spec_.lambda;
  for (std::int64_t i = 0; i < len; ++i) {
    w.values[static_cast<std::size_t>(i)] = lambda * omega(start + i);
  }
  return w;
}

PotentialWindow sample(const PotentialSpec& spec, std::int64_t start, std::int64_t len) {
  if (start < 1) throw InputError("sample: start must be >= 1");
  if (len < 1) throw InputError("sample: len must be >= 1");
  Potential p(spec);
  p.ensure(start + len - 1);
  return p.window(start, len);
}

bool eventual_periodicity_check(const PotentialWindow& window, std::int64_t d,
                                std::int64_t n0) {
  if (d < 1) throw InputError("eventual_periodicity_check: d must be >= 1");
  if (d >= window.len()) {
    throw RangeError("eventual_periodicity_check: shift d exceeds the window");
  }
  const std::int64_t last = window.start + window.len() - 1;
  if (n0 < window.start || n0 + d > last) {
    throw RangeError("eventual_periodicity_check: n0 and n0+d must be in the window");
  }
  const auto at = [&](std::int64_t n) {
    return window.values[static_cast<std::size_t>(n - window.start)];
  };
  for (std::int64_t n = n0; n + d <= last; ++n) {
    if (at(n + d) != at(n)) return false;
  }
  return true;
}

}  // namespace aperiodic
