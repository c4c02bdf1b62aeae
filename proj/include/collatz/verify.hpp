#pragma once

// Named property suites runnable from the command line.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace collatz {

struct PropertyResult {
  std::string suite;
  std::string property;
  bool passed = true;
  /// Number of cases examined.
  std::uint64_t checked = 0;
  std::optional<std::string> counterexample;
};

/// lemma22, lemma24, thm25, thm34, cor36, lemma46 (and the alias "all").
std::span<const std::string_view> suite_names();
bool is_suite(std::string_view name);

/// Runs one suite, or every suite for "all". `max` is the upper end of the
/// range the suite scans; for lemma22 it is the largest n, for lemma24 the
/// number of random samples. Suites fall back to their own defaults when
/// `max` is absent.
std::vector<PropertyResult> run_suite(std::string_view name, std::optional<std::uint64_t> max = std::nullopt);

} // namespace collatz
