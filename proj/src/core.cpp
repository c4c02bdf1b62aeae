#include "collatz/core.hpp"

#include <array>
#include <utility>

namespace collatz {

namespace {

constexpr std::array<std::pair<StopReason, std::string_view>, 5> kStopNames{{
    {StopReason::ReachedOne, "ReachedOne"},
    {StopReason::ReachedMultipleOf3, "ReachedMultipleOf3"},
    {StopReason::BudgetExhausted, "BudgetExhausted"},
    {StopReason::CycleDetected, "CycleDetected"},
    {StopReason::NoPredecessor, "NoPredecessor"},
}};

} // namespace

std::string_view to_string(StopReason reason)
{
  for (const auto& [tag, name] : kStopNames)
    if (tag == reason)
      return name;
  return "Unknown";
}

std::optional<StopReason> parse_stop_reason(std::string_view text)
{
  for (const auto& [tag, name] : kStopNames)
    if (name == text)
      return tag;
  return std::nullopt;
}

NoPredecessorError::NoPredecessorError(const Nat& b)
    : std::domain_error(b.str() + " is divisible by 3 and has no odd predecessor"), number_(b)
{
}

Nat e_value(long n)
{
  if (n < -1)
    throw PreconditionError("e_value requires n >= -1");
  if (n == -1)
    return 0;
  return (pow4(static_cast<std::size_t>(n) + 1) - 1) / 3;
}

Nat realize(const JumpSpec& spec)
{
  require_odd(spec.base, "jump base must be odd");
  return pow4(spec.height) * spec.base + e_value(static_cast<long>(spec.height) - 1);
}

} // namespace collatz
