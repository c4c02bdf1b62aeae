#include "collatz/nat.hpp"

#include <algorithm>

namespace collatz {

namespace mp = boost::multiprecision;

Nat parse_nat(std::string_view text)
{
  unsigned base = 10;
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    base = 16;
    text.remove_prefix(2);
  }
  if (text.empty())
    throw PreconditionError("empty number");

  Nat value = 0;
  for (char c : text) {
    unsigned digit = 0;
    if (c >= '0' && c <= '9')
      digit = static_cast<unsigned>(c - '0');
    else if (base == 16 && c >= 'a' && c <= 'f')
      digit = static_cast<unsigned>(c - 'a' + 10);
    else if (base == 16 && c >= 'A' && c <= 'F')
      digit = static_cast<unsigned>(c - 'A' + 10);
    else
      throw PreconditionError("not a nonnegative integer: '" + std::string(text) + "'");
    if (digit >= base)
      throw PreconditionError("not a nonnegative integer: '" + std::string(text) + "'");
    value = value * base + digit;
  }
  return value;
}

std::string to_string(const Nat& value) { return value.str(); }

std::string to_binary(const Nat& value)
{
  if (value.is_zero())
    return "0";
  std::string bits;
  const std::size_t top = mp::msb(value);
  bits.reserve(top + 1);
  for (std::size_t i = top + 1; i-- > 0;)
    bits.push_back(mp::bit_test(value, static_cast<unsigned>(i)) ? '1' : '0');
  return bits;
}

unsigned mod3(const Nat& value)
{
  return static_cast<unsigned>(static_cast<Nat>(value % 3).convert_to<unsigned>());
}

std::size_t trailing_zeros(const Nat& value)
{
  if (value.sign() <= 0)
    throw PreconditionError("trailing_zeros requires a positive value");
  return mp::lsb(value);
}

std::size_t trailing_ones(const Nat& value)
{
  if (is_even(value))
    return 0;
  return mp::lsb(Nat{value + 1});
}

bool is_power_of_two(const Nat& value)
{
  return value.sign() > 0 && mp::lsb(value) == mp::msb(value);
}

bool is_power_of_four(const Nat& value)
{
  return is_power_of_two(value) && mp::lsb(value) % 2 == 0;
}

Nat odd_part(const Nat& value) { return value >> trailing_zeros(value); }

void require_positive(const Nat& value, const char* message)
{
  if (value.sign() <= 0)
    throw PreconditionError(message);
}

void require_odd(const Nat& value, const char* message)
{
  if (value.sign() <= 0 || is_even(value))
    throw PreconditionError(message);
}

bool fits_u64(const Nat& value)
{
  return value.sign() >= 0 && (value.is_zero() || mp::msb(value) < 64);
}

} // namespace collatz
