#include "aperiodic/hull.hpp"

#include <algorithm>
#include <cmath>

#include "aperiodic/errors.hpp"

namespace aperiodic {

SymbolSequence::SymbolSequence(std::vector<double> values, double negative_pad,
                               std::vector<double> alphabet)
    : values_(std::move(values)), pad_(negative_pad), alphabet_(std::move(alphabet)) {
  std::sort(alphabet_.begin(), alphabet_.end());
  alphabet_.erase(std::unique(alphabet_.begin(), alphabet_.end()), alphabet_.end());
  for (const double v : values_) {
    if (!in_alphabet(v)) throw InputError("SymbolSequence: value outside the alphabet");
  }
}

SymbolSequence SymbolSequence::mobius_point(std::int64_t n_max) {
  const auto mu = mobius_sieve(n_max);
  std::vector<double> values(static_cast<std::size_t>(n_max));
  for (std::int64_t n = 1; n <= n_max; ++n) {
    values[static_cast<std::size_t>(n - 1)] =
        static_cast<double>(mu[static_cast<std::size_t>(n)]);
  }
  return SymbolSequence(std::move(values), 0.0, {-1.0, 0.0, 1.0});
}

SymbolSequence SymbolSequence::from_potential(const PotentialSpec& spec,
                                              std::int64_t n_max, double negative_pad) {
  Potential p(spec);
  p.ensure(n_max);
  std::vector<double> values(static_cast<std::size_t>(n_max));
  std::vector<double> alphabet{negative_pad};
  for (std::int64_t n = 1; n <= n_max; ++n) {
    const double x = p.omega(n);
    values[static_cast<std::size_t>(n - 1)] = x;
    alphabet.push_back(x);
  }
  return SymbolSequence(std::move(values), negative_pad, std::move(alphabet));
}

double SymbolSequence::at(std::int64_t n) const {
  if (n <= 0) return pad_;
  if (n > n_max()) throw RangeError("SymbolSequence::at: index past n_max");
  return values_[static_cast<std::size_t>(n - 1)];
}

bool SymbolSequence::in_alphabet(double x) const {
  return std::binary_search(alphabet_.begin(), alphabet_.end(), x);
}

std::vector<double> shift_window(const SymbolSequence& seq, std::int64_t j,
                                 std::int64_t len) {
  if (len < 1) throw InputError("shift_window: len must be >= 1");
  if (j + len > seq.n_max()) {
    throw RangeError("shift_window: window extends past n_max on the positive side");
  }
  std::vector<double> out(static_cast<std::size_t>(len));
  for (std::int64_t i = 0; i < len; ++i) {
    out[static_cast<std::size_t>(i)] = seq.at(j + 1 + i);
  }
  return out;
}

std::int64_t pattern_count(const SymbolSequence& seq, std::span<const double> word,
                           std::int64_t N) {
  if (word.empty()) throw InputError("pattern_count: empty word");
  if (N < 1) throw InputError("pattern_count: N must be >= 1");
  const std::int64_t len = static_cast<std::int64_t>(word.size());
  if (N + len - 1 > seq.n_max()) {
    throw RangeError("pattern_count: occurrences would extend past n_max");
  }
  for (const double w : word) {
    if (!seq.in_alphabet(w)) throw InputError("pattern_count: word symbol outside the alphabet");
  }
  std::int64_t count = 0;
  for (std::int64_t k = 1; k <= N; ++k) {
    bool hit = true;
    for (std::int64_t i = 0; i < len; ++i) {
      if (seq.at(k + i) != word[static_cast<std::size_t>(i)]) {
        hit = false;
        break;
      }
    }
    if (hit) ++count;
  }
  return count;
}

double pattern_frequency(const SymbolSequence& seq, std::span<const double> word,
                         std::int64_t N) {
  return static_cast<double>(pattern_count(seq, word, N)) / static_cast<double>(N);
}

std::vector<std::pair<std::int64_t, double>> periodic_word_decay(
    const SymbolSequence& seq, std::span<const double> period_word,
    std::span<const std::int64_t> r_values, std::int64_t N) {
  if (period_word.empty()) throw InputError("periodic_word_decay: empty period word");
  std::vector<std::pair<std::int64_t, double>> table;
  table.reserve(r_values.size());
  for (const std::int64_t r : r_values) {
    if (r < 0) throw InputError("periodic_word_decay: r must be >= 0");
    std::vector<double> word(static_cast<std::size_t>(r + 1));
    for (std::int64_t i = 0; i <= r; ++i) {
      word[static_cast<std::size_t>(i)] =
          period_word[static_cast<std::size_t>(i % static_cast<std::int64_t>(period_word.size()))];
    }
    table.emplace_back(r, pattern_frequency(seq, word, N));
  }
  return table;
}

std::vector<std::int64_t> recurrence_positions(const SymbolSequence& seq,
                                               std::span<const double> word,
                                               std::int64_t search_end,
                                               std::int64_t max_hits) {
  if (word.empty()) throw InputError("recurrence_positions: empty word");
  if (search_end < 1) throw InputError("recurrence_positions: search_end must be >= 1");
  if (max_hits < 1) throw InputError("recurrence_positions: max_hits must be >= 1");
  const std::int64_t len = static_cast<std::int64_t>(word.size());
  const std::int64_t last = std::min(search_end, seq.n_max() - len + 1);
  std::vector<std::int64_t> hits;
  for (std::int64_t k = 1; k <= last; ++k) {
    bool hit = true;
    for (std::int64_t i = 0; i < len; ++i) {
      if (seq.at(k + i) != word[static_cast<std::size_t>(i)]) {
        hit = false;
        break;
      }
    }
    if (hit) {
      hits.push_back(k);
      if (static_cast<std::int64_t>(hits.size()) >= max_hits) break;
    }
  }
  return hits;
}

}  // namespace aperiodic
