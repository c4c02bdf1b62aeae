#pragma once

// Parallel, checkpointed range verification.
//
// A job covers [lo, hi] in contiguous chunks. Workers lease chunks in index
// order and hand back per-chunk totals; totals are committed strictly in
// chunk order, so the committed state is always a whole-chunk prefix and
// the report does not depend on the worker count.
//
// ForwardConvergence checks that each number reaches 1 within `budget`
// 3x+1 steps. ReverseConjecture checks that the reverse sequence of each odd
// number > 1 reaches an odd multiple of 3 within `budget` odd terms; even
// numbers and 1 are outside that domain and are counted as excluded.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "collatz/core.hpp"

namespace collatz {

enum class ScanKind { ForwardConvergence, ReverseConjecture };

std::string_view to_string(ScanKind kind);
std::optional<ScanKind> parse_scan_kind(std::string_view text);

inline constexpr std::uint64_t kDefaultForwardScanBudget = std::uint64_t{1} << 16;
inline constexpr std::uint64_t kDefaultReverseScanBudget = std::uint64_t{1} << 17;
inline constexpr std::uint64_t kDefaultChunkSize = std::uint64_t{1} << 16;

std::uint64_t default_scan_budget(ScanKind kind);

struct ScanJob {
  ScanKind kind = ScanKind::ForwardConvergence;
  Nat lo = 1;
  Nat hi = 1;
  std::uint64_t budget = kDefaultForwardScanBudget;
  std::uint64_t chunk_size = kDefaultChunkSize;
  std::optional<std::filesystem::path> checkpoint_path;
  std::optional<std::filesystem::path> output_path;
};

/// Throws ScanError unless 1 <= lo <= hi, budget >= 1 and chunk_size >= 1.
void validate(const ScanJob& job);

/// True when two jobs describe the same computation (paths are ignored).
bool same_parameters(const ScanJob& a, const ScanJob& b);

struct Failure {
  Nat number;
  StopReason reason;
  friend bool operator==(const Failure&, const Failure&) = default;
};

/// A maximum and the smallest number attaining it.
template <class Value>
struct Extremum {
  Value value{};
  Nat witness;
  friend bool operator==(const Extremum&, const Extremum&) = default;
};

template <class Value>
void offer(std::optional<Extremum<Value>>& best, const Value& value, const Nat& witness)
{
  if (!best || value > best->value || (value == best->value && witness < best->witness))
    best = Extremum<Value>{value, witness};
}

/// Aggregates over verified numbers. merge() is commutative and associative.
struct ScanTotals {
  std::uint64_t verified_count = 0;
  std::uint64_t excluded_count = 0;
  /// Sorted by number.
  std::vector<Failure> failed;
  std::optional<Extremum<Nat>> max_excursion;
  std::optional<Extremum<std::uint64_t>> max_steps;
  /// ReverseConjecture only: odd steps to convergence.
  std::optional<Extremum<std::uint64_t>> max_reverse_depth;

  void merge(const ScanTotals& other);
  friend bool operator==(const ScanTotals&, const ScanTotals&) = default;
};

struct ScanReport {
  ScanJob job;
  ScanTotals totals;
  /// Lowest number not yet committed; hi + 1 once complete.
  Nat next_unprocessed;
  bool complete = false;
  std::chrono::duration<double> elapsed{0};
};

/// Canonical JSON for a report: everything except elapsed time and file
/// paths. Two runs of the same job render byte-identically.
std::string canonical_json(const ScanReport& report);

struct ScanOptions {
  unsigned workers = 1;
  /// Stop leasing after this many chunks in this invocation (simulated interrupt).
  std::optional<std::uint64_t> max_chunks;
};

/// I/O failure, invalid job, corrupt checkpoint or parameter mismatch.
class ScanError : public std::runtime_error {
public:
  enum class Kind { InvalidJob, Io, CorruptCheckpoint, ParameterMismatch };
  ScanError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

ScanReport scan(const ScanJob& job, const ScanOptions& options = {});

/// Continues the job stored at `checkpoint`. When `invocation` is given its
/// parameters must match the stored ones; its output_path is used for
/// anomaly records.
ScanReport resume(const std::filesystem::path& checkpoint, const ScanOptions& options = {},
                  const std::optional<ScanJob>& invocation = std::nullopt);

/// Verdict for one number, as the scanner aggregates it.
struct NumberOutcome {
  StopReason stop = StopReason::BudgetExhausted;
  Nat peak;
  std::uint64_t steps = 0;
  /// Forward: 3x+1 steps. Reverse: odd steps (odd terms - 1).
  std::uint64_t depth = 0;
  friend bool operator==(const NumberOutcome&, const NumberOutcome&) = default;
};

/// Fixed-width fast path with promotion on overflow.
NumberOutcome evaluate_forward(const Nat& n, std::uint64_t budget);
/// Unbounded arithmetic only.
NumberOutcome evaluate_forward_exact(const Nat& n, std::uint64_t budget);
/// Fixed-width fast path; anything other than convergence is re-run exactly.
/// Requires an odd n.
NumberOutcome evaluate_reverse(const Nat& n, std::uint64_t budget);
/// Through reverse_sequence, with its set-based cycle detection.
NumberOutcome evaluate_reverse_exact(const Nat& n, std::uint64_t budget);

/// Checkpoint document (JSON): format tag, job parameters, next_unprocessed
/// and the committed totals.
struct Checkpoint {
  ScanJob job;
  Nat next_unprocessed;
  ScanTotals totals;
};

std::string checkpoint_json(const Checkpoint& checkpoint);
/// Throws ScanError(CorruptCheckpoint) on any structural problem.
Checkpoint parse_checkpoint(std::string_view text);
/// Write-temp-then-rename.
void write_checkpoint_file(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint read_checkpoint_file(const std::filesystem::path& path);

} // namespace collatz
