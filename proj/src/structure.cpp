#include "collatz/structure.hpp"

#include "collatz/forward.hpp"

namespace collatz {

Nat jump(const Nat& p, std::size_t n)
{
  require_odd(p, "jump requires an odd base");
  return realize(JumpSpec{p, n});
}

PredecessorBase predecessor_base(const Nat& b)
{
  require_odd(b, "predecessor_base requires an odd b >= 1");
  switch (mod3(b)) {
  case 1:
    return {b, (4 * b - 1) / 3};
  case 2:
    return {b, (2 * b - 1) / 3};
  default:
    throw NoPredecessorError(b);
  }
}

std::vector<Nat> predecessors(const Nat& b, std::size_t max_height)
{
  std::vector<Nat> out;
  out.reserve(max_height + 1);
  Nat current = predecessor_base(b).p;
  out.push_back(current);
  for (std::size_t n = 1; n <= max_height; ++n) {
    current = 4 * current + 1;
    out.push_back(current);
  }
  return out;
}

std::optional<std::size_t> jump_height_from(const Nat& a, const Nat& p)
{
  require_odd(a, "jump_height_from requires an odd a");
  require_odd(p, "jump_height_from requires an odd p");
  Nat x = a;
  std::size_t height = 0;
  while (x > p) {
    if (static_cast<unsigned>(x & 3) != 1)
      return std::nullopt;
    x >>= 2;
    ++height;
  }
  if (x != p)
    return std::nullopt;
  return height;
}

Nat second_odd(const Nat& a)
{
  require_positive(a, "second_odd requires a >= 1");
  return next_odd(odd_part(a));
}

bool equivalent(const Nat& a, const Nat& b) { return second_odd(a) == second_odd(b); }

Nat reduce_to_multiple_of_3(const Nat& a)
{
  require_odd(a, "reduce_to_multiple_of_3 requires an odd a >= 1");
  switch (mod3(a)) {
  case 0:
    return a;
  case 2:
    return 4 * a + 1;
  default:
    return 4 * (4 * a + 1) + 1;
  }
}

} // namespace collatz
