#include "collatz/scanner.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "collatz/kernels.hpp"
#include "collatz/reverse.hpp"

namespace collatz {

namespace {

using json = nlohmann::json;
using kernel::u128;

constexpr std::string_view kCheckpointFormat = "collatz-scan-checkpoint/1";
constexpr std::string_view kReportFormat = "collatz-scan-report/1";

bool fits_u128(const Nat& n) { return n.sign() >= 0 && (n.is_zero() || boost::multiprecision::msb(n) < 128); }

u128 to_u128(const Nat& n)
{
  const auto low = static_cast<std::uint64_t>(static_cast<Nat>(n & std::numeric_limits<std::uint64_t>::max()));
  const auto high = static_cast<std::uint64_t>(static_cast<Nat>(n >> 64));
  return (u128{high} << 64) | low;
}

// Outcome of the fixed-width path. The peak stays in 128 bits unless the
// run had to be finished in unbounded arithmetic.
struct FastOutcome {
  StopReason stop = StopReason::BudgetExhausted;
  u128 peak = 0;
  std::optional<Nat> wide_peak;
  std::uint64_t steps = 0;
  std::uint64_t depth = 0;

  Nat peak_nat() const { return wide_peak ? *wide_peak : kernel::to_nat(peak); }
};

StopReason forward_stop(kernel::Status status)
{
  return status == kernel::Status::Converged ? StopReason::ReachedOne : StopReason::BudgetExhausted;
}

template <class Word>
FastOutcome forward_outcome(const kernel::ForwardState<Word>& s, kernel::Status status)
{
  FastOutcome out;
  out.stop = forward_stop(status);
  if constexpr (std::is_same_v<Word, Nat>)
    out.wide_peak = s.peak;
  else
    out.peak = s.peak;
  out.steps = s.steps;
  out.depth = s.odd_steps;
  return out;
}

template <class Word>
FastOutcome forward_from(kernel::ForwardState<Word> s, std::uint64_t budget)
{
  const auto status = kernel::forward_run(s, budget);
  if constexpr (std::is_same_v<Word, std::uint64_t>) {
    if (status == kernel::Status::Overflow)
      return forward_from(kernel::widen<u128>(s), budget);
  } else if constexpr (std::is_same_v<Word, u128>) {
    if (status == kernel::Status::Overflow)
      return forward_from(kernel::widen<Nat>(s), budget);
  }
  return forward_outcome(s, status);
}

FastOutcome forward_fast(std::uint64_t n, std::uint64_t budget)
{
  return forward_from(kernel::forward_start<std::uint64_t>(n), budget);
}

FastOutcome to_fast(const NumberOutcome& outcome)
{
  FastOutcome out;
  out.stop = outcome.stop;
  out.wide_peak = outcome.peak;
  out.steps = outcome.steps;
  out.depth = outcome.depth;
  return out;
}

template <class Word>
FastOutcome reverse_from(kernel::ReverseState<Word> s, std::uint64_t budget, const Nat& start)
{
  const auto status = kernel::reverse_run(s, budget);
  if constexpr (std::is_same_v<Word, std::uint64_t>) {
    if (status == kernel::Status::Overflow)
      return reverse_from(kernel::widen<u128>(s), budget, start);
  } else if constexpr (std::is_same_v<Word, u128>) {
    if (status == kernel::Status::Overflow)
      return reverse_from(kernel::widen<Nat>(s), budget, start);
  }
  if (status != kernel::Status::Converged)
    return to_fast(evaluate_reverse_exact(start, budget));

  FastOutcome out;
  out.stop = StopReason::ReachedMultipleOf3;
  if constexpr (std::is_same_v<Word, Nat>)
    out.wide_peak = s.peak;
  else
    out.peak = s.peak;
  out.steps = s.steps;
  out.depth = s.odd_terms - 1;
  return out;
}

FastOutcome reverse_fast(std::uint64_t n, std::uint64_t budget)
{
  return reverse_from(kernel::reverse_start<std::uint64_t>(n), budget, Nat{n});
}

NumberOutcome to_number_outcome(const FastOutcome& fast)
{
  return {fast.stop, fast.peak_nat(), fast.steps, fast.depth};
}

bool in_conjecture_domain(const Nat& n) { return is_odd(n) && n > 1; }

// Extremum accumulation for one chunk of 64-bit numbers. Numbers are
// visited in increasing order, so a strict comparison keeps the smallest
// witness.
class FastExtremes {
public:
  void offer_peak(const FastOutcome& o, std::uint64_t n)
  {
    if (o.wide_peak) {
      offer(wide_peak_, *o.wide_peak, Nat{n});
    } else if (!has_peak_ || o.peak > peak_) {
      has_peak_ = true;
      peak_ = o.peak;
      peak_witness_ = n;
    }
  }

  void offer_steps(std::uint64_t value, std::uint64_t n) { offer_u64(steps_, value, n); }
  void offer_depth(std::uint64_t value, std::uint64_t n) { offer_u64(depth_, value, n); }

  void finish(ScanTotals& totals, bool with_depth) const
  {
    if (has_peak_)
      offer(totals.max_excursion, kernel::to_nat(peak_), Nat{peak_witness_});
    if (wide_peak_)
      offer(totals.max_excursion, wide_peak_->value, wide_peak_->witness);
    if (steps_.has)
      offer(totals.max_steps, steps_.value, Nat{steps_.witness});
    if (with_depth && depth_.has)
      offer(totals.max_reverse_depth, depth_.value, Nat{depth_.witness});
  }

private:
  struct Best {
    bool has = false;
    std::uint64_t value = 0;
    std::uint64_t witness = 0;
  };

  static void offer_u64(Best& best, std::uint64_t value, std::uint64_t n)
  {
    if (!best.has || value > best.value)
      best = {true, value, n};
  }

  bool has_peak_ = false;
  u128 peak_ = 0;
  std::uint64_t peak_witness_ = 0;
  std::optional<Extremum<Nat>> wide_peak_;
  Best steps_;
  Best depth_;
};

ScanTotals process_chunk_u64(ScanKind kind, std::uint64_t lo, std::uint64_t hi, std::uint64_t budget)
{
  ScanTotals totals;
  FastExtremes extremes;
  const bool reverse = kind == ScanKind::ReverseConjecture;
  for (std::uint64_t n = lo;; ++n) {
    if (reverse && ((n & 1) == 0 || n == 1)) {
      ++totals.excluded_count;
    } else {
      const FastOutcome o = reverse ? reverse_fast(n, budget) : forward_fast(n, budget);
      const StopReason success = reverse ? StopReason::ReachedMultipleOf3 : StopReason::ReachedOne;
      if (o.stop != success) {
        totals.failed.push_back({Nat{n}, o.stop});
      } else {
        ++totals.verified_count;
        extremes.offer_peak(o, n);
        extremes.offer_steps(o.steps, n);
        if (reverse)
          extremes.offer_depth(o.depth, n);
      }
    }
    if (n == hi)
      break;
  }
  extremes.finish(totals, reverse);
  return totals;
}

ScanTotals process_chunk_nat(ScanKind kind, const Nat& lo, const Nat& hi, std::uint64_t budget)
{
  ScanTotals totals;
  const bool reverse = kind == ScanKind::ReverseConjecture;
  for (Nat n = lo; n <= hi; ++n) {
    if (reverse && !in_conjecture_domain(n)) {
      ++totals.excluded_count;
      continue;
    }
    const NumberOutcome o = reverse ? evaluate_reverse(n, budget) : evaluate_forward(n, budget);
    const StopReason success = reverse ? StopReason::ReachedMultipleOf3 : StopReason::ReachedOne;
    if (o.stop != success) {
      totals.failed.push_back({n, o.stop});
      continue;
    }
    ++totals.verified_count;
    offer(totals.max_excursion, o.peak, n);
    offer(totals.max_steps, o.steps, n);
    if (reverse)
      offer(totals.max_reverse_depth, o.depth, n);
  }
  return totals;
}

ScanTotals process_chunk(ScanKind kind, const Nat& lo, const Nat& hi, std::uint64_t budget)
{
  if (fits_u64(hi))
    return process_chunk_u64(kind, static_cast<std::uint64_t>(lo), static_cast<std::uint64_t>(hi), budget);
  return process_chunk_nat(kind, lo, hi, budget);
}

// ---------------------------------------------------------------- JSON

[[noreturn]] void corrupt(const std::string& what)
{
  throw ScanError(ScanError::Kind::CorruptCheckpoint, "corrupt checkpoint: " + what);
}

json job_json(const ScanJob& job)
{
  return json{{"kind", std::string(to_string(job.kind))},
              {"lo", job.lo.str()},
              {"hi", job.hi.str()},
              {"budget", job.budget},
              {"chunk_size", job.chunk_size}};
}

template <class Value>
json extremum_json(const std::optional<Extremum<Value>>& e)
{
  if (!e)
    return nullptr;
  if constexpr (std::is_same_v<Value, Nat>)
    return json{{"value", e->value.str()}, {"witness", e->witness.str()}};
  else
    return json{{"value", e->value}, {"witness", e->witness.str()}};
}

json totals_json(const ScanTotals& totals)
{
  json failed = json::array();
  for (const auto& f : totals.failed)
    failed.push_back(json{{"number", f.number.str()}, {"stop", std::string(to_string(f.reason))}});
  return json{{"verified_count", totals.verified_count},
              {"excluded_count", totals.excluded_count},
              {"failed", std::move(failed)},
              {"max_excursion", extremum_json(totals.max_excursion)},
              {"max_steps", extremum_json(totals.max_steps)},
              {"max_reverse_depth", extremum_json(totals.max_reverse_depth)}};
}

Nat nat_field(const json& object, const char* key)
{
  if (!object.contains(key) || !object.at(key).is_string())
    corrupt(std::string("missing or non-string field '") + key + "'");
  try {
    return parse_nat(object.at(key).get<std::string>());
  } catch (const PreconditionError&) {
    corrupt(std::string("field '") + key + "' is not a nonnegative integer");
  }
}

std::uint64_t u64_field(const json& object, const char* key)
{
  if (!object.contains(key) || !object.at(key).is_number_unsigned())
    corrupt(std::string("missing or non-integer field '") + key + "'");
  return object.at(key).get<std::uint64_t>();
}

template <class Value>
std::optional<Extremum<Value>> extremum_field(const json& object, const char* key)
{
  if (!object.contains(key))
    corrupt(std::string("missing field '") + key + "'");
  const json& field = object.at(key);
  if (field.is_null())
    return std::nullopt;
  if (!field.is_object())
    corrupt(std::string("field '") + key + "' is not an object");
  if constexpr (std::is_same_v<Value, Nat>)
    return Extremum<Nat>{nat_field(field, "value"), nat_field(field, "witness")};
  else
    return Extremum<std::uint64_t>{u64_field(field, "value"), nat_field(field, "witness")};
}

ScanJob parse_job(const json& object)
{
  if (!object.is_object())
    corrupt("job is not an object");
  ScanJob job;
  if (!object.contains("kind") || !object.at("kind").is_string())
    corrupt("missing job kind");
  const auto kind = parse_scan_kind(object.at("kind").get<std::string>());
  if (!kind)
    corrupt("unknown job kind");
  job.kind = *kind;
  job.lo = nat_field(object, "lo");
  job.hi = nat_field(object, "hi");
  job.budget = u64_field(object, "budget");
  job.chunk_size = u64_field(object, "chunk_size");
  return job;
}

ScanTotals parse_totals(const json& object)
{
  if (!object.is_object())
    corrupt("totals is not an object");
  ScanTotals totals;
  totals.verified_count = u64_field(object, "verified_count");
  totals.excluded_count = u64_field(object, "excluded_count");
  if (!object.contains("failed") || !object.at("failed").is_array())
    corrupt("missing failure list");
  for (const json& entry : object.at("failed")) {
    if (!entry.is_object() || !entry.contains("stop") || !entry.at("stop").is_string())
      corrupt("malformed failure entry");
    const auto reason = parse_stop_reason(entry.at("stop").get<std::string>());
    if (!reason)
      corrupt("unknown stop reason in failure entry");
    totals.failed.push_back({nat_field(entry, "number"), *reason});
  }
  totals.max_excursion = extremum_field<Nat>(object, "max_excursion");
  totals.max_steps = extremum_field<std::uint64_t>(object, "max_steps");
  totals.max_reverse_depth = extremum_field<std::uint64_t>(object, "max_reverse_depth");
  return totals;
}

// ---------------------------------------------------------------- running

Nat chunk_lo(const ScanJob& job, std::uint64_t index) { return job.lo + Nat{index} * job.chunk_size; }

Nat chunk_hi(const ScanJob& job, std::uint64_t index)
{
  Nat end = chunk_lo(job, index) + job.chunk_size - 1;
  return end < job.hi ? end : job.hi;
}

std::uint64_t chunk_count(const ScanJob& job)
{
  const Nat count = job.hi - job.lo + 1;
  const Nat chunks = (count + job.chunk_size - 1) / job.chunk_size;
  return static_cast<std::uint64_t>(chunks);
}

class OutputSink {
public:
  OutputSink(const std::optional<std::filesystem::path>& path, bool append)
  {
    if (!path)
      return;
    stream_.open(*path, append ? std::ios::app : std::ios::trunc);
    if (!stream_)
      throw ScanError(ScanError::Kind::Io, "cannot open output file " + path->string());
    path_ = *path;
  }

  void anomaly(ScanKind kind, const Failure& failure)
  {
    write(json{{"record", "anomaly"},
               {"kind", std::string(to_string(kind))},
               {"number", failure.number.str()},
               {"stop", std::string(to_string(failure.reason))}});
  }

  void summary(const ScanReport& report)
  {
    write(json{{"record", "summary"},
               {"report", json::parse(canonical_json(report))},
               {"elapsed_seconds", report.elapsed.count()}});
  }

private:
  void write(const json& record)
  {
    if (!stream_.is_open())
      return;
    stream_ << record.dump() << '\n';
    stream_.flush();
    if (!stream_)
      throw ScanError(ScanError::Kind::Io, "cannot write output file " + path_.string());
  }

  std::ofstream stream_;
  std::filesystem::path path_;
};

ScanReport run(const ScanJob& job, Checkpoint state, const ScanOptions& options, bool append_output)
{
  const auto started = std::chrono::steady_clock::now();
  OutputSink sink(job.output_path, append_output);

  const std::uint64_t total = chunk_count(job);
  const std::uint64_t first = state.next_unprocessed > job.hi
                                  ? total
                                  : static_cast<std::uint64_t>((state.next_unprocessed - job.lo) / job.chunk_size);
  std::uint64_t stop = total;
  if (options.max_chunks)
    stop = std::min(total, first + *options.max_chunks);

  std::atomic<std::uint64_t> next_lease{first};
  std::mutex commit_mutex;
  std::map<std::uint64_t, ScanTotals> pending;
  std::uint64_t next_commit = first;
  std::exception_ptr failure;
  std::atomic<bool> abort{false};

  auto commit_ready = [&] {
    // Caller holds commit_mutex.
    for (auto it = pending.find(next_commit); it != pending.end(); it = pending.find(next_commit)) {
      for (const auto& f : it->second.failed)
        sink.anomaly(job.kind, f);
      state.totals.merge(it->second);
      state.next_unprocessed = chunk_hi(job, next_commit) + 1;
      pending.erase(it);
      ++next_commit;
      if (job.checkpoint_path)
        write_checkpoint_file(*job.checkpoint_path, state);
    }
  };

  auto worker = [&] {
    try {
      while (!abort.load()) {
        const std::uint64_t index = next_lease.fetch_add(1);
        if (index >= stop)
          return;
        ScanTotals chunk = process_chunk(job.kind, chunk_lo(job, index), chunk_hi(job, index), job.budget);
        std::lock_guard lock(commit_mutex);
        pending.emplace(index, std::move(chunk));
        commit_ready();
      }
    } catch (...) {
      std::lock_guard lock(commit_mutex);
      if (!failure)
        failure = std::current_exception();
      abort = true;
    }
  };

  const unsigned workers = std::max(1u, options.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (unsigned i = 0; i < workers; ++i)
      threads.emplace_back(worker);
  }
  if (failure)
    std::rethrow_exception(failure);

  ScanReport report;
  report.job = job;
  report.totals = std::move(state.totals);
  report.next_unprocessed = state.next_unprocessed;
  report.complete = report.next_unprocessed > job.hi;
  report.elapsed = std::chrono::steady_clock::now() - started;
  if (report.complete)
    sink.summary(report);
  return report;
}

} // namespace

std::string_view to_string(ScanKind kind)
{
  return kind == ScanKind::ForwardConvergence ? "forward-convergence" : "reverse-conjecture";
}

std::optional<ScanKind> parse_scan_kind(std::string_view text)
{
  if (text == "forward-convergence")
    return ScanKind::ForwardConvergence;
  if (text == "reverse-conjecture")
    return ScanKind::ReverseConjecture;
  return std::nullopt;
}

std::uint64_t default_scan_budget(ScanKind kind)
{
  return kind == ScanKind::ForwardConvergence ? kDefaultForwardScanBudget : kDefaultReverseScanBudget;
}

void validate(const ScanJob& job)
{
  if (job.lo < 1 || job.lo > job.hi)
    throw ScanError(ScanError::Kind::InvalidJob, "scan range must satisfy 1 <= lo <= hi");
  if (job.budget == 0)
    throw ScanError(ScanError::Kind::InvalidJob, "scan budget must be >= 1");
  if (job.chunk_size == 0)
    throw ScanError(ScanError::Kind::InvalidJob, "chunk size must be >= 1");
  if (!fits_u64(job.hi - job.lo + 1))
    throw ScanError(ScanError::Kind::InvalidJob, "scan range holds more than 2^64 - 1 numbers");
}

bool same_parameters(const ScanJob& a, const ScanJob& b)
{
  return a.kind == b.kind && a.lo == b.lo && a.hi == b.hi && a.budget == b.budget && a.chunk_size == b.chunk_size;
}

void ScanTotals::merge(const ScanTotals& other)
{
  verified_count += other.verified_count;
  excluded_count += other.excluded_count;
  const auto middle = failed.insert(failed.end(), other.failed.begin(), other.failed.end());
  std::inplace_merge(failed.begin(), middle, failed.end(),
                     [](const Failure& x, const Failure& y) { return x.number < y.number; });
  if (other.max_excursion)
    offer(max_excursion, other.max_excursion->value, other.max_excursion->witness);
  if (other.max_steps)
    offer(max_steps, other.max_steps->value, other.max_steps->witness);
  if (other.max_reverse_depth)
    offer(max_reverse_depth, other.max_reverse_depth->value, other.max_reverse_depth->witness);
}

std::string canonical_json(const ScanReport& report)
{
  json doc{{"format", std::string(kReportFormat)},
           {"job", job_json(report.job)},
           {"complete", report.complete},
           {"next_unprocessed", report.next_unprocessed.str()},
           {"totals", totals_json(report.totals)}};
  return doc.dump(2);
}

NumberOutcome evaluate_forward(const Nat& n, std::uint64_t budget)
{
  require_positive(n, "forward scan requires n >= 1");
  if (fits_u64(n))
    return to_number_outcome(forward_fast(static_cast<std::uint64_t>(n), budget));
  if (fits_u128(n))
    return to_number_outcome(forward_from(kernel::forward_start<u128>(to_u128(n)), budget));
  return evaluate_forward_exact(n, budget);
}

NumberOutcome evaluate_forward_exact(const Nat& n, std::uint64_t budget)
{
  require_positive(n, "forward scan requires n >= 1");
  return to_number_outcome(forward_from(kernel::forward_start<Nat>(n), budget));
}

NumberOutcome evaluate_reverse(const Nat& n, std::uint64_t budget)
{
  require_odd(n, "reverse scan requires an odd n");
  if (fits_u64(n))
    return to_number_outcome(reverse_fast(static_cast<std::uint64_t>(n), budget));
  if (fits_u128(n))
    return to_number_outcome(reverse_from(kernel::reverse_start<u128>(to_u128(n)), budget, n));
  return to_number_outcome(reverse_from(kernel::reverse_start<Nat>(n), budget, n));
}

NumberOutcome evaluate_reverse_exact(const Nat& n, std::uint64_t budget)
{
  const ReverseTrace trace = reverse_sequence(n, budget);
  NumberOutcome out;
  out.stop = trace.stop;
  out.peak = *std::max_element(trace.terms.begin(), trace.terms.end());
  out.steps = trace.terms.size() - 1;
  out.depth = trace.odd_terms.empty() ? 0 : trace.odd_terms.size() - 1;
  return out;
}

std::string checkpoint_json(const Checkpoint& checkpoint)
{
  json doc{{"format", std::string(kCheckpointFormat)},
           {"job", job_json(checkpoint.job)},
           {"next_unprocessed", checkpoint.next_unprocessed.str()},
           {"totals", totals_json(checkpoint.totals)}};
  return doc.dump(2);
}

Checkpoint parse_checkpoint(std::string_view text)
{
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    corrupt(std::string("not valid JSON (") + e.what() + ")");
  }
  if (!doc.is_object())
    corrupt("top level is not an object");
  if (!doc.contains("format") || doc.at("format") != kCheckpointFormat)
    corrupt("missing or unsupported format tag");
  if (!doc.contains("job") || !doc.contains("totals"))
    corrupt("missing job or totals");

  Checkpoint checkpoint;
  checkpoint.job = parse_job(doc.at("job"));
  checkpoint.next_unprocessed = nat_field(doc, "next_unprocessed");
  checkpoint.totals = parse_totals(doc.at("totals"));

  try {
    validate(checkpoint.job);
  } catch (const ScanError& e) {
    corrupt(std::string("invalid job: ") + e.what());
  }
  const ScanJob& job = checkpoint.job;
  const Nat& next = checkpoint.next_unprocessed;
  if (next < job.lo || next > job.hi + 1)
    corrupt("next_unprocessed lies outside the job range");
  if (next <= job.hi && (next - job.lo) % job.chunk_size != 0)
    corrupt("next_unprocessed is not a chunk boundary");
  const Nat done = next - job.lo;
  const Nat counted = Nat{checkpoint.totals.verified_count} + checkpoint.totals.excluded_count +
                      checkpoint.totals.failed.size();
  if (counted != done)
    corrupt("totals do not account for exactly the committed numbers");
  return checkpoint;
}

void write_checkpoint_file(const std::filesystem::path& path, const Checkpoint& checkpoint)
{
  std::filesystem::path temp = path;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::trunc);
    out << checkpoint_json(checkpoint) << '\n';
    out.flush();
    if (!out)
      throw ScanError(ScanError::Kind::Io, "cannot write checkpoint " + temp.string());
  }
  std::error_code ec;
  std::filesystem::rename(temp, path, ec);
  if (ec)
    throw ScanError(ScanError::Kind::Io, "cannot move checkpoint into place: " + ec.message());
}

Checkpoint read_checkpoint_file(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw ScanError(ScanError::Kind::Io, "cannot open checkpoint " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_checkpoint(buffer.str());
}

ScanReport scan(const ScanJob& job, const ScanOptions& options)
{
  validate(job);
  Checkpoint state{job, job.lo, {}};
  state.job.checkpoint_path.reset();
  state.job.output_path.reset();
  if (job.checkpoint_path)
    write_checkpoint_file(*job.checkpoint_path, state);
  return run(job, std::move(state), options, false);
}

ScanReport resume(const std::filesystem::path& checkpoint, const ScanOptions& options,
                  const std::optional<ScanJob>& invocation)
{
  Checkpoint state = read_checkpoint_file(checkpoint);
  if (invocation && !same_parameters(*invocation, state.job))
    throw ScanError(ScanError::Kind::ParameterMismatch,
                    "job parameters do not match checkpoint " + checkpoint.string());
  ScanJob job = state.job;
  job.checkpoint_path = checkpoint;
  if (invocation)
    job.output_path = invocation->output_path;
  return run(job, std::move(state), options, true);
}

} // namespace collatz
