#include "collatz/tails.hpp"

#include <stdexcept>

#include "collatz/forward.hpp"

namespace collatz {

std::size_t tail_length(const Nat& a)
{
  require_odd(a, "tail_length requires an odd a >= 1");
  return trailing_ones(a) - 1;
}

Nat TailDecomposition::recompose() const
{
  Nat sum = pow2(tail_length + 1) - 1;
  for (std::size_t exponent : high_exponents)
    sum += pow2(exponent);
  return sum;
}

TailDecomposition tail_decompose(const Nat& a)
{
  TailDecomposition out{a, tail_length(a), {}};
  const Nat high = a >> (out.tail_length + 1);
  if (!high.is_zero()) {
    const auto top = boost::multiprecision::msb(high);
    for (std::size_t bit = top + 1; bit-- > 0;)
      if (boost::multiprecision::bit_test(high, static_cast<unsigned>(bit)))
        out.high_exponents.push_back(bit + out.tail_length + 1);
  }
  return out;
}

std::vector<Nat> predicted_odd_iterates(const Nat& a)
{
  const std::size_t n = tail_length(a);
  if (n == 0)
    throw PreconditionError("predicted_odd_iterates requires tail length >= 1");

  // a + 1 carries 2^(n+1) as its lowest set bit, so every halving below is exact.
  std::vector<Nat> out;
  out.reserve(n);
  Nat scaled = a + 1;
  for (std::size_t i = 1; i <= n; ++i) {
    scaled = (3 * scaled) >> 1;
    out.push_back(scaled - 1);
  }
  return out;
}

DescentWitness descent_witness(const Nat& a)
{
  require_odd(a, "descent_witness requires an odd a > 1");
  if (a == 1)
    throw PreconditionError("descent_witness requires an odd a > 1");

  const std::size_t n = tail_length(a);
  DescentWitness out{a, 0};
  if (n > 0)
    out = {predicted_odd_iterates(a).back(), n};

  if (tail_length(out.witness) != 0 || next_odd(out.witness) >= out.witness)
    throw std::logic_error("descent witness postcondition failed for " + a.str());
  return out;
}

} // namespace collatz
