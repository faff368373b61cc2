#ifndef APERIODIC_HULL_HPP
#define APERIODIC_HULL_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "aperiodic/potential.hpp"

namespace aperiodic {

// Finite-alphabet sequence with two-sided access: indices n in [1, n_max]
// hold data, n <= 0 returns negative_pad (zero for the Moebius point).
class SymbolSequence {
 public:
  SymbolSequence(std::vector<double> values, double negative_pad,
                 std::vector<double> alphabet);

  // mu(1..n_max) with zero padding on the left.
  static SymbolSequence mobius_point(std::int64_t n_max);

  // Unscaled symbols omega_1..omega_n_max of a potential spec.
  static SymbolSequence from_potential(const PotentialSpec& spec, std::int64_t n_max,
                                       double negative_pad = 0.0);

  double at(std::int64_t n) const;  // throws RangeError for n > n_max
  std::int64_t n_max() const { return static_cast<std::int64_t>(values_.size()); }
  double negative_pad() const { return pad_; }
  const std::vector<double>& alphabet() const { return alphabet_; }
  bool in_alphabet(double x) const;

 private:
  std::vector<double> values_;
  double pad_ = 0.0;
  std::vector<double> alphabet_;  // sorted, unique
};

// (omega_{j+1}, ..., omega_{j+len}) with padding applied for non-positive
// indices; the positive side must stay within n_max.
std::vector<double> shift_window(const SymbolSequence& seq, std::int64_t j,
                                 std::int64_t len);

// Number of positions k in [1, N] where the word occurs (occurrences may
// extend up to N + |word| - 1, which must be materialized).
std::int64_t pattern_count(const SymbolSequence& seq, std::span<const double> word,
                           std::int64_t N);
double pattern_frequency(const SymbolSequence& seq, std::span<const double> word,
                         std::int64_t N);

// For each r: frequency of the length-(r+1) prefix of the periodic
// extension of period_word, at window count N.
std::vector<std::pair<std::int64_t, double>> periodic_word_decay(
    const SymbolSequence& seq, std::span<const double> period_word,
    std::span<const std::int64_t> r_values, std::int64_t N);

// Positions k <= search_end where the word occurs, up to max_hits.
std::vector<std::int64_t> recurrence_positions(const SymbolSequence& seq,
                                               std::span<const double> word,
                                               std::int64_t search_end,
                                               std::int64_t max_hits);

}  // namespace aperiodic

#endif
