// Acceptance gate. Each criterion is checked against an independent oracle
// (plain 64/128-bit iteration or direct summation) and reported on one line.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "collatz/forward.hpp"
#include "collatz/reverse.hpp"
#include "collatz/scanner.hpp"
#include "collatz/structure.hpp"
#include "collatz/tails.hpp"

using namespace collatz;
namespace fs = std::filesystem;

namespace {

using u128 = unsigned __int128;

// Reference traces, cut at the first 1.
const char* const kTrace27 =
    "27, 82, 41, 124, 62, 31, 94, 47, 142, 71, 214, 107, 322, 161, 484, 242, 121, 364, 182, 91, 274, 137, 412, "
    "206, 103, 310, 155, 466, 233, 700, 350, 175, 526, 263, 790, 395, 1186, 593, 1780, 890, 445, 1336, 668, 334, "
    "167, 502, 251, 754, 377, 1132, 566, 283, 850, 425, 1276, 638, 319, 958, 479, 1438, 719, 2158, 1079, 3238, "
    "1619, 4858, 2429, 7288, 3644, 1822, 911, 2734, 1367, 4102, 2051, 6154, 3077, 9232, 4616, 2308, 1154, 577, "
    "1732, 866, 433, 1300, 650, 325, 976, 488, 244, 122, 61, 184, 92, 46, 23, 70, 35, 106, 53, 160, 80, 40, 20, "
    "10, 5, 16, 8, 4, 2, 1";
const char* const kOdd27 = "27, 41, 31, 47, 71, 107, 161, 121, 91, 137, 103, 155, 233, 175, 263, 395, 593, 445, 167, "
                           "251, 377, 283, 425, 319, 479, 719, 1079, 1619, 2429, 911, 1367, 2051, 3077, 577, 433, "
                           "325, 61, 23, 35, 53, 5, 1";
const char* const kReverse121 = "121, 242, 484, 161, 322, 107, 214, 71, 142, 47, 94, 31, 62, 124, 41, 82, 27";
const char* const kReverseOdd121 = "121, 161, 107, 71, 47, 31, 41, 27";
// Odd terms of "485, 970, 323, 646, 215, 430, 143, 286, 95, 190, 63".
const char* const kReverseOdd485 = "485, 323, 215, 143, 95, 63";
const char* const kComplete485 =
    "63, 190, 95, 286, 143, 430, 215, 646, 323, 970, 485, 1456, 728, 364, 182, 91, 274, 137, 412, 206, 103, 310, "
    "155, 466, 233, 700, 350, 175, 526, 263, 790, 395, 1186, 593, 1780, 890, 445, 1336, 668, 334, 167, 502, 251, "
    "754, 377, 1132, 566, 283, 850, 425, 1276, 638, 319, 958, 479, 1438, 719, 2158, 1079, 3238, 1619, 4858, 2429, "
    "7288, 3644, 1822, 911, 2734, 1367, 4102, 2051, 6154, 3077, 9232, 4616, 2308, 1154, 577, 1732, 866, 433, 1300, "
    "650, 325, 976, 488, 244, 122, 61, 184, 92, 46, 23, 70, 35, 106, 53, 160, 80, 40, 20, 10, 5, 16, 8, 4, 2, 1";

std::string render(const std::vector<Nat>& terms)
{
  std::string s;
  for (const Nat& t : terms)
    s += (s.empty() ? "" : ", ") + t.str();
  return s;
}

std::uint64_t raw_next_odd(std::uint64_t a)
{
  std::uint64_t x = 3 * a + 1;
  while ((x & 1) == 0)
    x >>= 1;
  return x;
}

std::uint64_t raw_reverse_odd(std::uint64_t b)
{
  return (2 * b - 1) % 3 == 0 ? (2 * b - 1) / 3 : (4 * b - 1) / 3;
}

std::size_t raw_trailing_ones(std::uint64_t a)
{
  std::size_t ones = 0;
  for (; a & 1; a >>= 1)
    ++ones;
  return ones;
}

std::uint64_t as_u64(const Nat& n) { return static_cast<std::uint64_t>(n); }

// Collects mismatch descriptions; only the first few are kept.
class Check {
public:
  void fail(const std::string& what)
  {
    if (failures_++ < 5)
      notes_ += (notes_.empty() ? "" : "; ") + what;
  }
  void expect(bool ok, const std::string& what)
  {
    if (!ok)
      fail(what);
  }
  bool ok() const { return failures_ == 0; }
  std::string summary(const std::string& passed_note) const
  {
    if (ok())
      return passed_note;
    return std::to_string(failures_) + " failure(s): " + notes_;
  }

private:
  std::uint64_t failures_ = 0;
  std::string notes_;
};

struct Criterion {
  int number;
  std::string title;
  std::function<std::pair<bool, std::string>()> run;
};

std::pair<bool, std::string> reference_traces()
{
  Check c;
  c.expect(render(collatz_sequence(27).terms) == kTrace27, "collatz_sequence(27)");
  c.expect(render(odd_subsequence(27).terms) == kOdd27, "odd_subsequence(27)");
  const ReverseTrace r121 = reverse_sequence(121);
  c.expect(render(r121.terms) == kReverse121, "reverse_sequence(121)");
  c.expect(r121.converged_to && *r121.converged_to == 27, "reverse_sequence(121) converged_to");
  c.expect(render(reverse_odd_subsequence(121).terms) == kReverseOdd121, "reverse_odd_subsequence(121)");
  c.expect(render(reverse_odd_subsequence(485).terms) == kReverseOdd485, "reverse_odd_subsequence(485)");
  c.expect(render(complete_sequence(485).terms) == kComplete485, "complete_sequence(485)");
  return {c.ok(), c.summary("7 traces byte-identical")};
}

std::pair<bool, std::string> jump_identities()
{
  Check c;
  Nat power = 1;
  Nat sum = 0;
  for (long n = 0; n <= 512; ++n) {
    // e(n - 1) by summing powers of four below 4^n.
    c.expect(power == 3 * e_value(n - 1) + 1, "4^n = 3e(n-1)+1 at n=" + std::to_string(n));
    c.expect(e_value(n - 1) == sum, "e(n-1) sum at n=" + std::to_string(n));
    sum += power;
    power *= 4;
  }

  std::mt19937_64 rng(20240);
  std::uint64_t checked = 0;
  for (int sample = 0; sample < 200; ++sample) {
    const Nat b = ((Nat{rng()} << 64) | Nat{rng()}) | 1;
    Nat four_n = 1;
    for (std::size_t n = 0; n <= 64; ++n, four_n <<= 2) {
      c.expect(3 * jump(b, n) + 1 == four_n * (3 * b + 1), "jump identity b=" + b.str() + " n=" + std::to_string(n));
      ++checked;
    }
  }
  return {c.ok(), c.summary("n in [0,512]; " + std::to_string(checked) + " jump identities")};
}

std::pair<bool, std::string> predecessor_characterisation()
{
  Check c;
  std::uint64_t sound = 0;
  for (std::uint64_t b = 1; b <= 10'000; b += 2) {
    if (b % 3 == 0)
      continue;
    const Nat p = predecessor_base(Nat{b}).p;
    for (std::size_t n = 0; n <= 6; ++n) {
      c.expect(raw_next_odd(as_u64(jump(p, n))) == b, "soundness b=" + std::to_string(b));
      ++sound;
    }
  }
  for (std::uint64_t a = 3; a <= 100'000; a += 2) {
    const std::uint64_t b = raw_next_odd(a);
    const std::uint64_t p = as_u64(predecessor_base(Nat{b}).p);
    std::uint64_t x = p;
    while (x < a)
      x = 4 * x + 1;
    c.expect(x == a, "completeness a=" + std::to_string(a));
    c.expect(p <= a, "minimality a=" + std::to_string(a));
  }
  return {c.ok(), c.summary(std::to_string(sound) + " soundness checks; odd a in [3, 1e5] complete and minimal")};
}

std::pair<bool, std::string> closed_form_iterates()
{
  Check c;
  std::uint64_t checked = 0;
  for (std::uint64_t a = 3; a <= 1'000'000; a += 2) {
    const std::size_t n = raw_trailing_ones(a) - 1;
    if (n == 0)
      continue;
    const std::vector<Nat> predicted = predicted_odd_iterates(Nat{a});
    if (predicted.size() != n) {
      c.fail("length a=" + std::to_string(a));
      continue;
    }
    std::uint64_t walk = a;
    for (std::size_t i = 0; i < n; ++i) {
      walk = raw_next_odd(walk);
      c.expect(as_u64(predicted[i]) == walk, "iterate a=" + std::to_string(a));
      c.expect(raw_trailing_ones(walk) - 1 == n - i - 1, "tail decrement a=" + std::to_string(a));
    }
    ++checked;
  }
  return {c.ok(), c.summary(std::to_string(checked) + " odd a with tail >= 1 matched")};
}

std::pair<bool, std::string> no_monotone_rise()
{
  Check c;
  for (std::uint64_t a = 3; a <= 1'000'000; a += 2) {
    const std::size_t n = raw_trailing_ones(a) - 1;
    std::uint64_t p = a;
    bool fell = false;
    for (std::size_t k = 0; k <= n && !fell; ++k) {
      const std::uint64_t q = raw_next_odd(p);
      fell = q < p;
      if (!fell)
        p = q;
    }
    c.expect(fell, "no descent a=" + std::to_string(a));
    const DescentWitness w = descent_witness(Nat{a});
    c.expect(as_u64(w.witness) == p && w.steps == n, "witness a=" + std::to_string(a));
  }
  return {c.ok(), c.summary("500k odd a descend within tail_length + 1 odd steps")};
}

std::pair<bool, std::string> reverse_leaves_two_mod_three()
{
  Check c;
  std::uint64_t checked = 0;
  for (std::uint64_t a = 3; a <= 1'000'000; a += 2) {
    if (a % 3 == 0)
      continue;
    const Trace trace = reverse_odd_subsequence(Nat{a});
    std::uint64_t p = a;
    bool left = false;
    for (std::size_t i = 0; i < trace.terms.size(); ++i) {
      if (as_u64(trace.terms[i]) != p) {
        c.fail("term mismatch a=" + std::to_string(a));
        break;
      }
      if (p % 3 != 2) {
        left = true;
        break;
      }
      const std::uint64_t next = raw_reverse_odd(p);
      c.expect(next < p, "not decreasing a=" + std::to_string(a));
      p = next;
    }
    c.expect(left, "never left 2 mod 3 a=" + std::to_string(a));
    ++checked;
  }
  return {c.ok(), c.summary(std::to_string(checked) + " reverse odd subsequences")};
}

std::pair<bool, std::string> conjecture_scan()
{
  ScanJob job;
  job.kind = ScanKind::ReverseConjecture;
  job.lo = 2;
  job.hi = 1'000'000;
  job.budget = default_scan_budget(job.kind);
  const ScanReport one = scan(job, {1, {}});
  const ScanReport eight = scan(job, {8, {}});

  // Independent depth oracle over odd numbers > 1.
  std::uint64_t depth = 0, witness = 0;
  for (std::uint64_t a = 3; a <= 1'000'000; a += 2) {
    std::uint64_t p = a, d = 0;
    while (p % 3 != 0) {
      p = raw_reverse_odd(p);
      ++d;
    }
    if (d > depth)
      depth = d, witness = a;
  }

  Check c;
  c.expect(one.complete, "incomplete");
  c.expect(one.totals.failed.empty(), std::to_string(one.totals.failed.size()) + " failures");
  c.expect(one.totals.verified_count == 499'999, "verified_count");
  c.expect(canonical_json(one) == canonical_json(eight), "1 vs 8 workers differ");
  c.expect(one.totals.max_reverse_depth && one.totals.max_reverse_depth->value == depth &&
               one.totals.max_reverse_depth->witness == witness,
           "max_reverse_depth disagrees with oracle");
  return {c.ok(), c.summary("499999 odd numbers converge; 1 and 8 workers byte-identical; max depth " +
                            std::to_string(depth) + " at " + std::to_string(witness))};
}

std::pair<bool, std::string> forward_scan()
{
  ScanJob job;
  job.kind = ScanKind::ForwardConvergence;
  job.lo = 1;
  job.hi = 10'000'000;
  job.budget = default_scan_budget(job.kind);
  const ScanReport report = scan(job, {4, {}});

  // Independent peak oracle in 128-bit arithmetic.
  u128 peak = 0;
  std::uint64_t peak_witness = 0;
  for (std::uint64_t n = 1; n <= 10'000'000; ++n) {
    u128 x = n, top = n;
    while (x != 1) {
      x = (x & 1) ? 3 * x + 1 : x >> 1;
      if (x > top)
        top = x;
    }
    if (top > peak)
      peak = top, peak_witness = n;
  }

  job.lo = 27;
  job.hi = 27;
  const ScanReport singleton = scan(job);

  Check c;
  c.expect(report.complete && report.totals.failed.empty(), "failures in [1, 1e7]");
  c.expect(report.totals.verified_count == 10'000'000, "verified_count");
  c.expect(report.totals.max_excursion && report.totals.max_excursion->value == Nat{static_cast<std::uint64_t>(peak)} &&
               report.totals.max_excursion->witness == peak_witness,
           "max_excursion disagrees with oracle");
  c.expect(singleton.totals.max_excursion && singleton.totals.max_excursion->value == 9232 &&
               singleton.totals.max_excursion->witness == 27,
           "singleton [27, 27] max_excursion");
  return {c.ok(), c.summary("1e7 numbers reach 1; max excursion " + report.totals.max_excursion->value.str() +
                            " at " + report.totals.max_excursion->witness.str() + "; [27,27] peak 9232")};
}

std::pair<bool, std::string> crash_safety()
{
  const fs::path dir = fs::temp_directory_path() / ("collatz-acceptance-" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  Check c;
  std::mt19937_64 rng(9);
  int runs = 0;
  for (ScanKind kind : {ScanKind::ReverseConjecture, ScanKind::ForwardConvergence}) {
    ScanJob job;
    job.kind = kind;
    job.lo = 2;
    job.hi = 1'000'000;
    job.budget = default_scan_budget(kind);
    job.chunk_size = 50'000;
    const std::string expected = canonical_json(scan(job, {2, {}}));

    // Interrupt after 0 chunks, after the last, and at random boundaries in between.
    for (std::uint64_t stop_after : {std::uint64_t{0}, std::uint64_t{20}, 1 + rng() % 19, 1 + rng() % 19}) {
      const fs::path checkpoint = dir / ("cp" + std::to_string(runs++) + ".json");
      ScanJob interrupted = job;
      interrupted.checkpoint_path = checkpoint;
      scan(interrupted, {1 + static_cast<unsigned>(rng() % 8), stop_after});
      // A stale temp file from an interrupted write must not matter.
      std::ofstream(fs::path(checkpoint).concat(".tmp")) << "{ torn write";
      ScanReport report = resume(checkpoint, {1 + static_cast<unsigned>(rng() % 8), 1 + rng() % 7});
      while (!report.complete)
        report = resume(checkpoint, {1 + static_cast<unsigned>(rng() % 8), 1 + rng() % 7});
      c.expect(canonical_json(report) == expected,
               std::string(to_string(kind)) + " interrupted after " + std::to_string(stop_after));
    }
  }
  fs::remove_all(dir);
  return {c.ok(), c.summary(std::to_string(runs) + " interrupted runs byte-identical to uninterrupted")};
}

} // namespace

int main()
{
  const std::vector<Criterion> criteria{
      {1, "reference traces reproduced exactly", reference_traces},
      {2, "e(n) and jump identities in exact arithmetic", jump_identities},
      {3, "predecessor characterisation: soundness, completeness, minimality", predecessor_characterisation},
      {4, "closed-form odd iterates and tail decrement up to 1e6", closed_form_iterates},
      {5, "odd subsequence falls within tail_length + 1 steps up to 1e6", no_monotone_rise},
      {6, "reverse odd subsequences leave 2 mod 3 while decreasing up to 1e6", reverse_leaves_two_mod_three},
      {7, "reverse-conjecture scan over [2, 1e6], worker-independent", conjecture_scan},
      {8, "forward-convergence scan over [1, 1e7]", forward_scan},
      {9, "interrupted and resumed scans match uninterrupted runs", crash_safety},
  };

  int failed = 0;
  for (const Criterion& criterion : criteria) {
    const auto started = std::chrono::steady_clock::now();
    bool ok = false;
    std::string detail;
    try {
      std::tie(ok, detail) = criterion.run();
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2fs", seconds);
    std::cout << (ok ? "PASS" : "FAIL") << " [" << criterion.number << "] " << criterion.title << " (" << timing
              << "): " << detail << std::endl;
    failed += ok ? 0 : 1;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
