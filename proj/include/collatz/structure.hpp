#pragma once

// Jumps and consecutive-odd predecessors.
//
// An odd A precedes an odd B consecutively among the odd terms of some
// Collatz sequence iff A is a jump 4^n * P + e(n - 1) from the predecessor
// base P of B. Odd multiples of 3 have no odd predecessor at all.

#include <cstddef>
#include <optional>
#include <vector>

#include "collatz/core.hpp"

namespace collatz {

/// 4^n * p + e(n - 1); p must be odd. jump(p, 0) == p.
Nat jump(const Nat& p, std::size_t n);

struct PredecessorBase {
  Nat b;
  /// (4b - 1) / 3 when b = 1 mod 3, (2b - 1) / 3 when b = 2 mod 3.
  Nat p;
};

/// Smallest odd number that can occur right before b among odd terms.
/// Throws NoPredecessorError when b is divisible by 3.
PredecessorBase predecessor_base(const Nat& b);

/// jump(predecessor_base(b).p, n) for n = 0..max_height, base first.
std::vector<Nat> predecessors(const Nat& b, std::size_t max_height);

/// Height n with a == jump(p, n), found by exact inverse iteration x -> (x - 1) / 4.
std::optional<std::size_t> jump_height_from(const Nat& a, const Nat& p);

/// Second odd term of the sequence of a (1 for powers of two and for 1).
Nat second_odd(const Nat& a);

/// Sequences are equivalent when they share their second odd term.
bool equivalent(const Nat& a, const Nat& b);

/// An odd multiple of 3 whose sequence is equivalent to that of the odd a:
/// a, 4a + 1 or 4(4a + 1) + 1 depending on a mod 3.
Nat reduce_to_multiple_of_3(const Nat& a);

} // namespace collatz
