#include "collatz/reverse.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "collatz/forward.hpp"
#include "collatz/structure.hpp"

namespace collatz {

Nat reverse_step(const Nat& r)
{
  require_positive(r, "reverse_step requires r >= 1");
  if (is_even(r) && mod3(r) == 1)
    return (r - 1) / 3;
  return 2 * r;
}

ReverseTrace reverse_sequence(const Nat& start, std::size_t budget)
{
  require_positive(start, "reverse_sequence requires start >= 1");
  if (budget == 0)
    throw PreconditionError("reverse_sequence requires budget >= 1");

  ReverseTrace trace{start, {start}, {}, StopReason::BudgetExhausted, std::nullopt};
  if (is_even(start) && mod3(start) == 0) {
    trace.stop = StopReason::ReachedMultipleOf3;
    trace.converged_to = odd_part(start);
    return trace;
  }

  std::set<Nat> seen;
  Nat current = start;
  for (;;) {
    if (is_odd(current)) {
      if (!seen.insert(current).second) {
        trace.stop = StopReason::CycleDetected;
        return trace;
      }
      trace.odd_terms.push_back(current);
      if (mod3(current) == 0) {
        trace.stop = StopReason::ReachedMultipleOf3;
        trace.converged_to = current;
        return trace;
      }
      if (trace.odd_terms.size() >= budget) {
        trace.stop = StopReason::BudgetExhausted;
        return trace;
      }
    }
    current = reverse_step(current);
    trace.terms.push_back(current);
  }
}

Nat reverse_odd_step(const Nat& p) { return predecessor_base(p).p; }

Trace reverse_odd_subsequence(const Nat& start, std::size_t budget)
{
  require_odd(start, "reverse_odd_subsequence requires an odd start >= 1");
  if (budget == 0)
    throw PreconditionError("reverse_odd_subsequence requires budget >= 1");

  Trace trace{start, {start}, StopReason::BudgetExhausted, true};
  std::set<Nat> seen{start};
  Nat current = start;
  for (;;) {
    if (mod3(current) == 0) {
      trace.stop = StopReason::ReachedMultipleOf3;
      return trace;
    }
    if (trace.terms.size() >= budget) {
      trace.stop = StopReason::BudgetExhausted;
      return trace;
    }
    current = reverse_odd_step(current);
    if (!seen.insert(current).second) {
      trace.stop = StopReason::CycleDetected;
      return trace;
    }
    trace.terms.push_back(current);
  }
}

IncompleteSequenceError::IncompleteSequenceError(const Nat& a, StopReason reason)
    : std::runtime_error("reverse sequence of " + a.str() + " did not converge: " +
                         std::string(to_string(reason))),
      reason_(reason)
{
}

Trace complete_sequence(const Nat& a, std::size_t budget)
{
  require_odd(a, "complete_sequence requires an odd a >= 1");
  ReverseTrace reverse = reverse_sequence(a, budget);
  if (reverse.stop != StopReason::ReachedMultipleOf3)
    throw IncompleteSequenceError(a, reverse.stop);

  Trace forward = collatz_sequence(a);
  Trace out{reverse.terms.back(), {}, forward.stop, false};
  out.terms.reserve(reverse.terms.size() + forward.terms.size() - 1);
  std::reverse_copy(reverse.terms.begin(), reverse.terms.end(), std::back_inserter(out.terms));
  out.terms.insert(out.terms.end(), forward.terms.begin() + 1, forward.terms.end());
  return out;
}

} // namespace collatz
