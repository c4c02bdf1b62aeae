#pragma once

// Unbounded nonnegative integers and the bit-level helpers the engines share.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace collatz {

/// Nonnegative integer of unbounded magnitude. Arithmetic is exact; the
/// operations that accept a Nat reject negative values at their boundary.
using Nat = boost::multiprecision::cpp_int;

/// Thrown when an argument violates an operation's precondition
/// (zero where a positive number is required, even where odd is required...).
class PreconditionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Parses a decimal or `0x`-prefixed hexadecimal literal. No sign, no
/// whitespace, no digit separators.
Nat parse_nat(std::string_view text);

std::string to_string(const Nat& value);
std::string to_binary(const Nat& value);

inline bool is_odd(const Nat& value) { return boost::multiprecision::bit_test(value, 0); }
inline bool is_even(const Nat& value) { return !is_odd(value); }

/// Residue mod 3 in {0, 1, 2}; value must be nonnegative.
unsigned mod3(const Nat& value);

/// Number of trailing zero bits; value must be positive.
std::size_t trailing_zeros(const Nat& value);

/// Number of trailing one bits (0 for even values).
std::size_t trailing_ones(const Nat& value);

/// True iff value has exactly one set bit.
bool is_power_of_two(const Nat& value);

/// True iff value = 4^k for some k >= 0.
bool is_power_of_four(const Nat& value);

/// value with all factors of two removed; value must be positive.
Nat odd_part(const Nat& value);

inline Nat pow2(std::size_t exponent) { return Nat{1} << exponent; }
inline Nat pow4(std::size_t exponent) { return Nat{1} << (2 * exponent); }

/// Throws PreconditionError(message) unless value >= 1.
void require_positive(const Nat& value, const char* message);
/// Throws PreconditionError(message) unless value is odd and >= 1.
void require_odd(const Nat& value, const char* message);

/// True iff value fits in 64 unsigned bits.
bool fits_u64(const Nat& value);

} // namespace collatz
