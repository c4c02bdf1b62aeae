#pragma once

// Forward Collatz sequences: c -> 3c + 1 (odd), c -> c / 2 (even).
// Every sequence stops at the first 1; the 4, 2, 1 cycle is never emitted.

#include <cstddef>
#include <optional>

#include "collatz/core.hpp"

namespace collatz {

/// Default cap on the number of terms a forward trace may hold.
inline constexpr std::size_t kDefaultTermLimit = std::size_t{1} << 20;

Nat collatz_step(const Nat& c);

/// Full sequence from start. If `limit` terms are produced without
/// reaching 1 the trace stops with BudgetExhausted.
Trace collatz_sequence(const Nat& start, std::size_t limit = kDefaultTermLimit);

/// (3a + 1) / 2^r with 2^r the exact power of two dividing 3a + 1.
Nat next_odd(const Nat& a);

/// Odd terms of collatz_sequence(start). `limit` caps the number of odd terms.
Trace odd_subsequence(const Nat& start, std::size_t limit = kDefaultTermLimit);

struct ForwardStats {
  Nat start;
  /// Applications of the map before the first 1; absent when the limit hit first.
  std::optional<std::size_t> steps_to_one;
  Nat max_excursion;
  /// Final odd term greater than 1; absent for powers of two and unfinished runs.
  std::optional<Nat> last_odd_before_one;
};

/// Statistics over collatz_sequence(start, limit), computed without storing terms.
ForwardStats forward_stats(const Nat& start, std::size_t limit = kDefaultTermLimit);

} // namespace collatz
