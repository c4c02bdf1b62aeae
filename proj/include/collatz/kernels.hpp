#pragma once

// Per-number kernels for range scans, templated on the integer word.
//
// Word is std::uint64_t, unsigned __int128 or Nat. Fixed-width words check
// every multiplication before performing it and report Overflow with the
// state left exactly as it was, so the caller can widen the state and
// continue. Nat never overflows.

#include <bit>
#include <cstdint>
#include <limits>
#include <type_traits>

#include "collatz/nat.hpp"

namespace collatz::kernel {

using u128 = unsigned __int128;

template <class Word>
inline constexpr bool is_fixed_width = std::is_same_v<Word, std::uint64_t> || std::is_same_v<Word, u128>;

enum class Status {
  Converged,
  BudgetExhausted,
  Overflow,
  /// Reverse only: the odd term 1 repeats (1 -> 2 -> 4 -> 1).
  FixedPointOne,
};

inline unsigned ctz(std::uint64_t x) { return static_cast<unsigned>(std::countr_zero(x)); }
inline unsigned ctz(u128 x)
{
  const auto low = static_cast<std::uint64_t>(x);
  if (low != 0)
    return static_cast<unsigned>(std::countr_zero(low));
  return 64 + static_cast<unsigned>(std::countr_zero(static_cast<std::uint64_t>(x >> 64)));
}
inline unsigned ctz(const Nat& x) { return static_cast<unsigned>(boost::multiprecision::lsb(x)); }

template <class Word>
inline bool low_bit(const Word& x)
{
  if constexpr (std::is_same_v<Word, Nat>)
    return boost::multiprecision::bit_test(x, 0);
  else
    return (x & 1) != 0;
}

template <class Word>
inline unsigned residue3(const Word& x)
{
  if constexpr (std::is_same_v<Word, Nat>)
    return mod3(x);
  else
    return static_cast<unsigned>(x % 3);
}

/// Widening conversions between tiers.
inline Nat to_nat(const Nat& x) { return x; }
inline Nat to_nat(std::uint64_t x) { return Nat{x}; }
inline Nat to_nat(u128 x) { return (Nat{static_cast<std::uint64_t>(x >> 64)} << 64) | static_cast<std::uint64_t>(x); }
inline u128 to_u128(std::uint64_t x) { return x; }

template <class Word>
struct ForwardState {
  Word value{};
  /// Largest term seen so far.
  Word peak{};
  /// Map applications (halvings and 3x+1 steps).
  std::uint64_t steps = 0;
  /// 3x+1 applications; this is what the budget limits.
  std::uint64_t odd_steps = 0;
};

template <class Word>
ForwardState<Word> forward_start(Word start)
{
  ForwardState<Word> s;
  s.value = start;
  s.peak = start;
  return s;
}

/// Runs the forward map until the first 1. Requires s.value >= 1.
template <class Word>
Status forward_run(ForwardState<Word>& s, std::uint64_t budget)
{
  while (s.value != 1) {
    if (low_bit(s.value)) {
      if (s.odd_steps >= budget)
        return Status::BudgetExhausted;
      if constexpr (is_fixed_width<Word>) {
        constexpr Word limit = (std::numeric_limits<Word>::max() - 1) / 3;
        if (s.value > limit)
          return Status::Overflow;
      }
      s.value = 3 * s.value + 1;
      ++s.odd_steps;
      ++s.steps;
      if (s.value > s.peak)
        s.peak = s.value;
    }
    const unsigned shift = ctz(s.value);
    s.value >>= shift;
    s.steps += shift;
  }
  return Status::Converged;
}

template <class To, class From>
ForwardState<To> widen(const ForwardState<From>& s)
{
  if constexpr (std::is_same_v<To, Nat>)
    return {to_nat(s.value), to_nat(s.peak), s.steps, s.odd_steps};
  else
    return {To(s.value), To(s.peak), s.steps, s.odd_steps};
}

template <class Word>
struct ReverseState {
  /// Current odd term.
  Word value{};
  Word peak{};
  /// Reverse map applications, doublings included.
  std::uint64_t steps = 0;
  /// Odd terms produced so far, the start included.
  std::uint64_t odd_terms = 1;
};

template <class Word>
ReverseState<Word> reverse_start(Word odd_start)
{
  ReverseState<Word> s;
  s.value = odd_start;
  s.peak = odd_start;
  return s;
}

/// Runs the reverse map on odd terms: p = 2 mod 3 goes p, 2p, (2p-1)/3 and
/// p = 1 mod 3 goes p, 2p, 4p, (4p-1)/3. Requires an odd s.value.
template <class Word>
Status reverse_run(ReverseState<Word>& s, std::uint64_t budget)
{
  for (;;) {
    const unsigned r = residue3(s.value);
    if (r == 0)
      return Status::Converged;
    if (s.odd_terms >= budget)
      return Status::BudgetExhausted;
    if (s.value == 1)
      return Status::FixedPointOne;
    if (r == 2) {
      if constexpr (is_fixed_width<Word>) {
        if (s.value > std::numeric_limits<Word>::max() / 2)
          return Status::Overflow;
      }
      const Word doubled = 2 * s.value;
      if (doubled > s.peak)
        s.peak = doubled;
      s.value = (doubled - 1) / 3;
      s.steps += 2;
    } else {
      if constexpr (is_fixed_width<Word>) {
        if (s.value > std::numeric_limits<Word>::max() / 4)
          return Status::Overflow;
      }
      const Word quadrupled = 4 * s.value;
      if (quadrupled > s.peak)
        s.peak = quadrupled;
      s.value = (quadrupled - 1) / 3;
      s.steps += 3;
    }
    ++s.odd_terms;
  }
}

template <class To, class From>
ReverseState<To> widen(const ReverseState<From>& s)
{
  if constexpr (std::is_same_v<To, Nat>)
    return {to_nat(s.value), to_nat(s.peak), s.steps, s.odd_terms};
  else
    return {To(s.value), To(s.peak), s.steps, s.odd_terms};
}

} // namespace collatz::kernel
