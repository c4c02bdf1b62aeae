#pragma once

// The unique reverse Collatz sequence.
//
// r -> (r - 1) / 3 when r is even and r = 1 mod 3, r -> 2r otherwise. From an
// odd p not divisible by 3 this doubles once or twice and lands on the
// smallest odd predecessor of p, so the odd terms follow reverse_odd_step.
// The sequence converges once an odd term is a multiple of 3; past that
// point it only doubles.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "collatz/core.hpp"

namespace collatz {

/// Default per-number cap on odd terms in a reverse run.
inline constexpr std::size_t kDefaultReverseBudget = std::size_t{1} << 17;

Nat reverse_step(const Nat& r);

struct ReverseTrace {
  Nat start;
  /// Every produced term including the doublings. On CycleDetected the last
  /// entry is the repeated odd term.
  std::vector<Nat> terms;
  /// Distinct odd terms in order of first production.
  std::vector<Nat> odd_terms;
  StopReason stop = StopReason::BudgetExhausted;
  /// Present iff stop == ReachedMultipleOf3; odd and divisible by 3.
  std::optional<Nat> converged_to;
};

/// Iterates reverse_step until an odd multiple of 3, a repeated odd term, or
/// `budget` odd terms without convergence. An even multiple of 3 as start
/// only ever doubles; it converges at once to its odd part.
ReverseTrace reverse_sequence(const Nat& start, std::size_t budget = kDefaultReverseBudget);

/// predecessor_base(p).p; throws NoPredecessorError for multiples of 3.
Nat reverse_odd_step(const Nat& p);

/// Odd-only form of reverse_sequence for an odd start; terms equal its odd_terms.
Trace reverse_odd_subsequence(const Nat& start, std::size_t budget = kDefaultReverseBudget);

/// Thrown by complete_sequence when the reverse phase does not converge.
class IncompleteSequenceError : public std::runtime_error {
public:
  IncompleteSequenceError(const Nat& a, StopReason reason);
  StopReason reason() const noexcept { return reason_; }

private:
  StopReason reason_;
};

/// Reverse run of the odd a played forwards (head = the converged multiple
/// of 3, no pre-head doublings), then collatz_sequence(a) without its
/// duplicated first term. trace.start is the head.
Trace complete_sequence(const Nat& a, std::size_t budget = kDefaultReverseBudget);

} // namespace collatz
