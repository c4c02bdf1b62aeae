#include "collatz/verify.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <stdexcept>

#include "collatz/core.hpp"
#include "collatz/forward.hpp"
#include "collatz/reverse.hpp"
#include "collatz/structure.hpp"
#include "collatz/tails.hpp"

namespace collatz {

namespace {

constexpr std::array<std::string_view, 6> kSuites{"lemma22", "lemma24", "thm25", "thm34", "cor36", "lemma46"};

// Records the first counterexample and counts cases.
class Property {
public:
  Property(std::string_view suite, std::string property)
  {
    result_.suite = std::string(suite);
    result_.property = std::move(property);
  }

  void check(bool ok, auto&& describe)
  {
    ++result_.checked;
    if (!ok && result_.passed) {
      result_.passed = false;
      result_.counterexample = describe();
    }
  }

  PropertyResult take() { return std::move(result_); }

private:
  PropertyResult result_;
};

std::vector<PropertyResult> lemma22(std::uint64_t max)
{
  Property power("lemma22", "4^n = 3 e(n-1) + 1");
  Property recurrence("lemma22", "e(n) = 4 e(n-1) + 1");
  for (std::uint64_t n = 0; n <= max; ++n) {
    const long k = static_cast<long>(n);
    const Nat previous = e_value(k - 1);
    power.check(pow4(n) == 3 * previous + 1, [&] { return "n = " + std::to_string(n); });
    recurrence.check(e_value(k) == 4 * previous + 1, [&] { return "n = " + std::to_string(n); });
  }
  return {power.take(), recurrence.take()};
}

std::vector<PropertyResult> lemma24(std::uint64_t samples)
{
  Property identity("lemma24", "3 jump(b, n) + 1 = 4^n (3b + 1)");
  std::mt19937_64 rng(0x5eed'2024);
  for (std::uint64_t s = 0; s < samples; ++s) {
    const Nat b = ((Nat{rng()} << 64) | rng()) | 1;
    for (std::size_t n = 0; n <= 64; ++n)
      identity.check(3 * jump(b, n) + 1 == pow4(n) * (3 * b + 1),
                     [&] { return "b = " + b.str() + ", n = " + std::to_string(n); });
  }
  return {identity.take()};
}

std::vector<PropertyResult> thm25(std::uint64_t max)
{
  Property soundness("thm25", "next_odd(jump(P(b), n)) = b");
  Property completeness("thm25", "every odd predecessor a of b is a jump from P(b)");
  Property minimality("thm25", "P(next_odd(a)) <= a");
  Property residue("thm25", "next_odd(a) is never divisible by 3");

  const std::uint64_t sound_max = std::min<std::uint64_t>(max, 10'000);
  for (std::uint64_t b = 1; b <= sound_max; b += 2) {
    if (b % 3 == 0)
      continue;
    const Nat p = predecessor_base(Nat{b}).p;
    for (std::size_t n = 0; n <= 6; ++n)
      soundness.check(next_odd(jump(p, n)) == b,
                      [&] { return "b = " + std::to_string(b) + ", n = " + std::to_string(n); });
  }
  for (std::uint64_t a = 1; a <= max; a += 2) {
    const Nat next = next_odd(Nat{a});
    residue.check(mod3(next) != 0, [&] { return "a = " + std::to_string(a); });
    if (a < 3)
      continue;
    const Nat p = predecessor_base(next).p;
    completeness.check(jump_height_from(Nat{a}, p).has_value(), [&] { return "a = " + std::to_string(a); });
    minimality.check(p <= a, [&] { return "a = " + std::to_string(a); });
  }
  return {soundness.take(), completeness.take(), minimality.take(), residue.take()};
}

std::vector<PropertyResult> thm34(std::uint64_t max)
{
  Property closed_form("thm34", "predicted_odd_iterates(a) = first n odd successors");
  Property decrement("thm34", "tail length of the i-th iterate is n - i");
  Property rise_fall("thm34", "next_odd(a) > a iff tail length >= 1");
  Property identity("thm34", "(3 (2^(n+1) - 1) + 1) / 2 = 2^(n+1) + 2^(n-1) + ... + 1");

  for (std::size_t n = 1; n <= 62; ++n) {
    Nat tail_sum = 0;
    for (std::size_t i = 0; i <= n; ++i)
      tail_sum += pow2(i);
    Nat expected = pow2(n + 1);
    for (std::size_t i = 0; i + 1 <= n; ++i)
      expected += pow2(i);
    identity.check((3 * tail_sum + 1) / 2 == expected, [&] { return "n = " + std::to_string(n); });
  }

  for (std::uint64_t a = 3; a <= max; a += 2) {
    const Nat value{a};
    const std::size_t n = tail_length(value);
    const Nat successor = next_odd(value);
    rise_fall.check((successor > value) == (n >= 1), [&] { return "a = " + std::to_string(a); });
    if (n == 0)
      continue;
    const std::vector<Nat> predicted = predicted_odd_iterates(value);
    Nat walk = value;
    bool same = predicted.size() == n;
    bool tails = true;
    for (std::size_t i = 0; same && i < n; ++i) {
      walk = next_odd(walk);
      same = predicted[i] == walk;
      tails = tails && tail_length(predicted[i]) == n - i - 1;
    }
    closed_form.check(same, [&] { return "a = " + std::to_string(a); });
    decrement.check(tails, [&] { return "a = " + std::to_string(a); });
  }
  return {closed_form.take(), decrement.take(), rise_fall.take(), identity.take()};
}

std::vector<PropertyResult> cor36(std::uint64_t max)
{
  Property descent("cor36", "odd terms fall within tail_length + 1 odd steps");
  for (std::uint64_t a = 3; a <= max; a += 2) {
    const Nat start{a};
    const std::size_t window = tail_length(start) + 1;
    Nat previous = start;
    bool fell = false;
    for (std::size_t step = 0; step < window && !fell; ++step) {
      const Nat next = next_odd(previous);
      fell = next < previous;
      previous = next;
    }
    descent.check(fell, [&] { return "a = " + std::to_string(a); });
  }
  return {descent.take()};
}

std::vector<PropertyResult> lemma46(std::uint64_t max)
{
  Property leaves("lemma46", "reverse odd terms reach a term not 2 mod 3");
  Property decreasing("lemma46", "reverse odd terms decrease while 2 mod 3");
  for (std::uint64_t a = 3; a <= max; a += 2) {
    if (a % 3 == 0)
      continue;
    const Trace run = reverse_odd_subsequence(Nat{a});
    bool left = false;
    bool monotone = true;
    for (std::size_t i = 0; i < run.terms.size(); ++i) {
      const unsigned r = mod3(run.terms[i]);
      if (i >= 1 && r != 2)
        left = true;
      if (r == 2 && i + 1 < run.terms.size() && run.terms[i + 1] >= run.terms[i])
        monotone = false;
    }
    leaves.check(left, [&] { return "a = " + std::to_string(a); });
    decreasing.check(monotone, [&] { return "a = " + std::to_string(a); });
  }
  return {leaves.take(), decreasing.take()};
}

} // namespace

std::span<const std::string_view> suite_names() { return kSuites; }

bool is_suite(std::string_view name)
{
  return name == "all" || std::find(kSuites.begin(), kSuites.end(), name) != kSuites.end();
}

std::vector<PropertyResult> run_suite(std::string_view name, std::optional<std::uint64_t> max)
{
  if (name == "all") {
    std::vector<PropertyResult> all;
    for (std::string_view suite : kSuites) {
      auto part = run_suite(suite, max);
      all.insert(all.end(), part.begin(), part.end());
    }
    return all;
  }
  if (name == "lemma22")
    return lemma22(max.value_or(512));
  if (name == "lemma24")
    return lemma24(max.value_or(200));
  if (name == "thm25")
    return thm25(max.value_or(100'000));
  if (name == "thm34")
    return thm34(max.value_or(1'000'000));
  if (name == "cor36")
    return cor36(max.value_or(1'000'000));
  if (name == "lemma46")
    return lemma46(max.value_or(1'000'000));
  throw std::invalid_argument("unknown suite: " + std::string(name));
}

} // namespace collatz
