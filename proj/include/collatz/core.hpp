#pragma once

// Vocabulary shared by every engine: stop reasons, traces, jumps and e(n).

#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "collatz/nat.hpp"

namespace collatz {

enum class StopReason {
  ReachedOne,
  ReachedMultipleOf3,
  BudgetExhausted,
  CycleDetected,
  NoPredecessor,
};

std::string_view to_string(StopReason reason);
std::optional<StopReason> parse_stop_reason(std::string_view text);

/// An ordered run of sequence terms. When odd_only is set, terms holds only
/// the odd values and terms[0] is the first odd value reached from start.
struct Trace {
  Nat start;
  std::vector<Nat> terms;
  StopReason stop = StopReason::BudgetExhausted;
  bool odd_only = false;
};

/// Thrown by operations asked for the predecessor of an odd multiple of 3.
class NoPredecessorError : public std::domain_error {
public:
  explicit NoPredecessorError(const Nat& b);
  const Nat& number() const noexcept { return number_; }

private:
  Nat number_;
};

/// e(n) = 4^0 + 4^1 + ... + 4^n, with e(-1) = 0. Closed form (4^(n+1) - 1) / 3.
Nat e_value(long n);

/// The odd number 4^height * base + e(height - 1).
struct JumpSpec {
  Nat base;
  std::size_t height = 0;
};

Nat realize(const JumpSpec& spec);

} // namespace collatz
