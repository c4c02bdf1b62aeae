#include "collatz/forward.hpp"

namespace collatz {

Nat collatz_step(const Nat& c)
{
  require_positive(c, "collatz_step requires c >= 1");
  if (is_odd(c))
    return 3 * c + 1;
  return c >> 1;
}

Trace collatz_sequence(const Nat& start, std::size_t limit)
{
  require_positive(start, "collatz_sequence requires start >= 1");
  Trace trace{start, {start}, StopReason::ReachedOne, false};
  Nat current = start;
  while (current != 1) {
    if (trace.terms.size() >= limit) {
      trace.stop = StopReason::BudgetExhausted;
      return trace;
    }
    current = collatz_step(current);
    trace.terms.push_back(current);
  }
  return trace;
}

Nat next_odd(const Nat& a)
{
  require_odd(a, "next_odd requires an odd a >= 1");
  return odd_part(3 * a + 1);
}

Trace odd_subsequence(const Nat& start, std::size_t limit)
{
  require_positive(start, "odd_subsequence requires start >= 1");
  Trace trace{start, {}, StopReason::ReachedOne, true};
  Nat current = odd_part(start);
  trace.terms.push_back(current);
  while (current != 1) {
    if (trace.terms.size() >= limit) {
      trace.stop = StopReason::BudgetExhausted;
      return trace;
    }
    current = next_odd(current);
    trace.terms.push_back(current);
  }
  return trace;
}

ForwardStats forward_stats(const Nat& start, std::size_t limit)
{
  require_positive(start, "forward_stats requires start >= 1");
  ForwardStats stats{start, std::nullopt, start, std::nullopt};
  Nat current = start;
  std::optional<Nat> last_odd;
  std::size_t terms = 1;
  while (current != 1) {
    if (terms >= limit)
      return stats;
    if (is_odd(current))
      last_odd = current;
    current = collatz_step(current);
    ++terms;
    if (current > stats.max_excursion)
      stats.max_excursion = current;
  }
  stats.steps_to_one = terms - 1;
  stats.last_odd_before_one = std::move(last_odd);
  return stats;
}

} // namespace collatz
