#ifndef APERIODIC_POTENTIAL_HPP
#define APERIODIC_POTENTIAL_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace aperiodic {

// Largest sieve the library will build (entries, not bytes).
inline constexpr std::int64_t kMaxSieveLength = 200'000'000;

// Moebius function table: result[n] = mu(n) for n in [1, n_max]; result[0]
// is unused. Linear sieve, O(n_max) time and memory.
std::vector<std::int8_t> mobius_sieve(std::int64_t n_max);

// Smallest prime p with d < p < 10d and the unique j in [0, p^2) such that
// p^2 divides k + n + j*d. Such j exists because p > d makes d invertible
// mod p^2, and a prime in (d, 10d) exists for every d >= 1.
struct ApZero {
  std::int64_t p;
  std::int64_t j;
};
ApZero ap_zero_search(std::int64_t k, std::int64_t n, std::int64_t d);

// Generator descriptor for a finite-valued potential v_n = lambda * omega_n.
struct PotentialSpec {
  enum class Kind { Mobius, Periodic, Bernoulli, Free, Custom };

  Kind kind = Kind::Mobius;
  double lambda = 1.0;
  std::vector<double> word;  // Periodic: omega_n = word[(n-1) mod |word|]
  double prob = 0.5;         // Bernoulli: P(omega_n = value0)
  double value0 = 1.0;
  double value1 = -1.0;
  std::uint64_t seed = 0;
  std::vector<double> data;  // Custom: omega_n = data[n-1]

  static PotentialSpec mobius(double lambda = 1.0);
  static PotentialSpec free();
  static PotentialSpec periodic(std::vector<double> word, double lambda = 1.0);
  static PotentialSpec bernoulli(double prob, double value0, double value1,
                                 std::uint64_t seed, double lambda = 1.0);
  static PotentialSpec custom(std::vector<double> data, double lambda = 1.0);

  // String forms: "mobius", "free", "periodic:a,b,...",
  // "bernoulli:p,v0,v1,seed" (seed optional, falls back to default_seed),
  // "custom:@file.csv" (one value per line).
  static PotentialSpec parse(const std::string& text, double lambda = 1.0,
                             std::uint64_t default_seed = 0);
  std::string to_string() const;

  int alphabet_bound() const;
  void validate() const;  // throws InputError on a malformed spec
};

// Contiguous block of potential values; values[i] = lambda * omega(start+i).
struct PotentialWindow {
  std::int64_t start = 1;
  std::vector<double> values;
  int alphabet_bound = 0;

  std::int64_t len() const { return static_cast<std::int64_t>(values.size()); }
  std::span<const double> view() const { return values; }
};

// Materializer for a spec. For the Moebius kind the sieve table is built
// once by ensure() and is then shared read-only; all const accessors are
// safe to call concurrently afterwards.
class Potential {
 public:
  explicit Potential(PotentialSpec spec);

  const PotentialSpec& spec() const { return spec_; }

  // Builds internal tables covering indices up to n_max. Not thread safe;
  // call before handing the object to concurrent readers.
  void ensure(std::int64_t n_max);

  double omega(std::int64_t n) const;  // unscaled symbol, n >= 1
  double value(std::int64_t n) const { return spec_.lambda * omega(n); }

  PotentialWindow window(std::int64_t start, std::int64_t len) const;

 private:
  PotentialSpec spec_;
  std::vector<std::int8_t> mu_;  // Moebius table, index n in [1, size-1]
};

// One-shot sampling; repeated calls agree on overlaps for every kind.
PotentialWindow sample(const PotentialSpec& spec, std::int64_t start,
                       std::int64_t len);

// True iff window values agree under shift by d for all in-window n >= n0.
bool eventual_periodicity_check(const PotentialWindow& window, std::int64_t d,
                                std::int64_t n0);

// Counter-based generator shared by the Bernoulli kind and tests.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace aperiodic

#endif
