#pragma once

// Binary tails of odd numbers.
//
// Write an odd a as 2^i1 + ... + 2^im + (2^n + ... + 2 + 1) with every
// i_j > n + 1. The low all-ones block is the tail and n is its length.
// A sequence rises at a (next odd term larger) exactly when n >= 1, and the
// next n odd terms are 3^i (a + 1) / 2^i - 1, each with tail length n - i.

#include <cstddef>
#include <vector>

#include "collatz/nat.hpp"

namespace collatz {

/// Trailing one bits of the odd a, minus one.
std::size_t tail_length(const Nat& a);

struct TailDecomposition {
  Nat a;
  std::size_t tail_length = 0;
  /// Strictly decreasing, every entry > tail_length + 1.
  std::vector<std::size_t> high_exponents;

  /// Sum of 2^i over high_exponents plus 2^(tail_length + 1) - 1.
  Nat recompose() const;
};

TailDecomposition tail_decompose(const Nat& a);

/// The first tail_length(a) odd successors of a in closed form. Requires
/// tail_length(a) >= 1.
std::vector<Nat> predicted_odd_iterates(const Nat& a);

struct DescentWitness {
  /// Odd term with tail length 0, where the sequence falls next.
  Nat witness;
  /// Odd steps from a to witness (= tail_length(a)).
  std::size_t steps = 0;
};

/// Requires odd a > 1.
DescentWitness descent_witness(const Nat& a);

} // namespace collatz
