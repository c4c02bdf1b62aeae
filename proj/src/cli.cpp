#include "collatz/cli.hpp"

#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "collatz/forward.hpp"
#include "collatz/reverse.hpp"
#include "collatz/scanner.hpp"
#include "collatz/structure.hpp"
#include "collatz/tails.hpp"
#include "collatz/verify.hpp"

namespace collatz::cli {

namespace {

using json = nlohmann::json;

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::string join(const std::vector<Nat>& terms)
{
  std::string line;
  for (const Nat& t : terms) {
    if (!line.empty())
      line += ' ';
    line += t.str();
  }
  return line;
}

json string_array(const std::vector<Nat>& terms)
{
  json array = json::array();
  for (const Nat& t : terms)
    array.push_back(t.str());
  return array;
}

void emit_terms_csv(std::ostream& out, const std::vector<Nat>& terms)
{
  out << "index,term\n";
  for (std::size_t i = 0; i < terms.size(); ++i)
    out << i << ',' << terms[i].str() << '\n';
}

Nat positional_number(const std::string& text)
{
  try {
    return parse_nat(text);
  } catch (const PreconditionError& e) {
    throw UsageError(e.what());
  }
}

Nat positive_number(const std::string& text)
{
  Nat n = positional_number(text);
  if (n.is_zero())
    throw UsageError("n must be >= 1");
  return n;
}

Nat odd_number(const std::string& text)
{
  Nat n = positive_number(text);
  if (is_even(n))
    throw UsageError("n must be odd");
  return n;
}

OutputFormat resolve_format(const std::string& flag)
{
  std::string chosen = flag;
  if (chosen.empty()) {
    const char* env = std::getenv(kFormatEnv);
    chosen = env != nullptr ? env : "text";
  }
  const auto format = parse_format(chosen);
  if (!format)
    throw UsageError("unknown output format '" + chosen + "' (expected text, json or csv)");
  return *format;
}

// ---------------------------------------------------------------- seq

struct SeqArgs {
  std::string n;
  bool odd_only = false;
  std::size_t limit = kDefaultTermLimit;
  std::string format;
};

int cmd_seq(const SeqArgs& args, std::ostream& out)
{
  const OutputFormat format = resolve_format(args.format);
  const Nat n = positive_number(args.n);
  if (args.limit == 0)
    throw UsageError("--limit must be >= 1");
  const Trace trace = args.odd_only ? odd_subsequence(n, args.limit) : collatz_sequence(n, args.limit);

  switch (format) {
  case OutputFormat::Text:
    out << join(trace.terms) << '\n';
    break;
  case OutputFormat::JsonRecords:
    out << json{{"record", "trace"},
                {"start", trace.start.str()},
                {"odd_only", trace.odd_only},
                {"stop", std::string(to_string(trace.stop))},
                {"terms", string_array(trace.terms)}}
               .dump()
        << '\n';
    break;
  case OutputFormat::Csv:
    emit_terms_csv(out, trace.terms);
    break;
  }
  return exit_code_for(trace.stop);
}

// ---------------------------------------------------------------- reverse

struct ReverseArgs {
  std::string n;
  std::size_t budget = kDefaultReverseBudget;
  bool odd_only = false;
  bool complete = false;
  std::string format;
};

int cmd_reverse(const ReverseArgs& args, std::ostream& out, std::ostream& err)
{
  const OutputFormat format = resolve_format(args.format);
  if (args.budget == 0)
    throw UsageError("--budget must be >= 1");
  if (args.complete && args.odd_only)
    throw UsageError("--complete and --odd-only are mutually exclusive");

  std::vector<Nat> terms;
  StopReason stop{};
  std::optional<Nat> converged_to;
  std::string kind;
  Nat start;

  if (args.complete) {
    start = odd_number(args.n);
    try {
      Trace trace = complete_sequence(start, args.budget);
      terms = std::move(trace.terms);
      converged_to = trace.start;
      stop = StopReason::ReachedMultipleOf3;
      if (trace.stop != StopReason::ReachedOne)
        stop = trace.stop;
    } catch (const IncompleteSequenceError& e) {
      err << "collatz: " << e.what() << '\n';
      return exit_code_for(e.reason());
    }
    kind = "complete";
  } else {
    start = positive_number(args.n);
    ReverseTrace trace = reverse_sequence(start, args.budget);
    terms = args.odd_only ? std::move(trace.odd_terms) : std::move(trace.terms);
    stop = trace.stop;
    converged_to = std::move(trace.converged_to);
    kind = args.odd_only ? "reverse-odd" : "reverse";
  }

  switch (format) {
  case OutputFormat::Text:
    out << join(terms) << '\n';
    if (converged_to)
      out << "converged_to: " << converged_to->str() << '\n';
    else
      out << "stop: " << to_string(stop) << '\n';
    break;
  case OutputFormat::JsonRecords:
    out << json{{"record", kind},
                {"start", start.str()},
                {"stop", std::string(to_string(stop))},
                {"converged_to", converged_to ? json(converged_to->str()) : json(nullptr)},
                {"terms", string_array(terms)}}
               .dump()
        << '\n';
    break;
  case OutputFormat::Csv:
    emit_terms_csv(out, terms);
    break;
  }
  return exit_code_for(stop);
}

// ---------------------------------------------------------------- analyze

int cmd_analyze(const std::string& n_text, const std::string& format_flag, std::ostream& out)
{
  const OutputFormat format = resolve_format(format_flag);
  const Nat a = odd_number(n_text);
  const TailDecomposition tail = tail_decompose(a);

  std::vector<Nat> predicted;
  if (tail.tail_length >= 1)
    predicted = predicted_odd_iterates(a);
  std::optional<DescentWitness> descent;
  if (a > 1)
    descent = descent_witness(a);
  std::optional<Nat> base;
  if (mod3(a) != 0)
    base = predecessor_base(a).p;
  const Nat reduced = reduce_to_multiple_of_3(a);

  std::string exponents;
  for (std::size_t e : tail.high_exponents) {
    if (!exponents.empty())
      exponents += ' ';
    exponents += std::to_string(e);
  }

  // Text and CSV share the same key/value rows.
  const std::vector<std::pair<std::string, std::string>> rows{
      {"number", a.str()},
      {"binary", to_binary(a)},
      {"tail_length", std::to_string(tail.tail_length)},
      {"high_exponents", exponents.empty() ? "none" : exponents},
      {"predicted_odd_iterates", predicted.empty() ? "none (tail length 0)" : join(predicted)},
      {"descent_witness",
       descent ? descent->witness.str() + " after " + std::to_string(descent->steps) + " odd steps" : "none (n = 1)"},
      {"predecessor_base", base ? base->str() : "none: multiple of 3"},
      {"reduce_to_multiple_of_3", reduced.str()},
  };

  switch (format) {
  case OutputFormat::Text:
    for (const auto& [key, value] : rows)
      out << key << ": " << value << '\n';
    break;
  case OutputFormat::Csv:
    out << "field,value\n";
    for (const auto& [key, value] : rows)
      out << csv_field(key) << ',' << csv_field(value) << '\n';
    break;
  case OutputFormat::JsonRecords: {
    json record{{"record", "analysis"},
                {"number", a.str()},
                {"binary", to_binary(a)},
                {"tail_length", tail.tail_length},
                {"high_exponents", tail.high_exponents},
                {"predicted_odd_iterates", string_array(predicted)},
                {"descent_witness",
                 descent ? json{{"witness", descent->witness.str()}, {"steps", descent->steps}} : json(nullptr)},
                {"predecessor_base", base ? json(base->str()) : json(nullptr)},
                {"reduce_to_multiple_of_3", reduced.str()}};
    out << record.dump() << '\n';
    break;
  }
  }
  return kExitOk;
}

// ---------------------------------------------------------------- scan

struct ScanArgs {
  std::string kind;
  std::string from;
  std::string to;
  std::optional<std::uint64_t> budget;
  unsigned jobs = 1;
  std::optional<std::uint64_t> chunk;
  std::string checkpoint;
  std::string out;
  bool resume = false;
  std::optional<std::uint64_t> stop_after_chunks;
  std::string format;
};

ScanKind scan_kind(const std::string& text)
{
  if (text == "converge")
    return ScanKind::ForwardConvergence;
  if (text == "conjecture")
    return ScanKind::ReverseConjecture;
  if (auto kind = parse_scan_kind(text))
    return *kind;
  throw UsageError("unknown scan kind '" + text + "' (expected converge or conjecture)");
}

template <class Value>
std::string extremum_text(const std::optional<Extremum<Value>>& e)
{
  if (!e)
    return "none";
  std::ostringstream s;
  s << e->value << " (witness " << e->witness.str() << ")";
  return s.str();
}

void emit_report(const ScanReport& report, OutputFormat format, std::ostream& out)
{
  const ScanTotals& t = report.totals;
  switch (format) {
  case OutputFormat::Text:
    out << "kind: " << to_string(report.job.kind) << '\n'
        << "range: " << report.job.lo.str() << ".." << report.job.hi.str() << '\n'
        << "budget: " << report.job.budget << '\n'
        << "verified: " << t.verified_count << '\n'
        << "excluded: " << t.excluded_count << '\n'
        << "failed: " << t.failed.size() << '\n';
    for (const Failure& f : t.failed)
      out << "  " << f.number.str() << ' ' << to_string(f.reason) << '\n';
    out << "max_excursion: " << extremum_text(t.max_excursion) << '\n'
        << "max_steps: " << extremum_text(t.max_steps) << '\n';
    if (report.job.kind == ScanKind::ReverseConjecture)
      out << "max_reverse_depth: " << extremum_text(t.max_reverse_depth) << '\n';
    out << "complete: " << (report.complete ? "true" : "false") << '\n'
        << "next_unprocessed: " << report.next_unprocessed.str() << '\n'
        << "elapsed_seconds: " << std::fixed << std::setprecision(3) << report.elapsed.count() << '\n';
    break;
  case OutputFormat::JsonRecords:
    out << json{{"record", "report"},
                {"report", json::parse(canonical_json(report))},
                {"elapsed_seconds", report.elapsed.count()}}
               .dump()
        << '\n';
    break;
  case OutputFormat::Csv:
    out << "field,value\n"
        << "kind," << to_string(report.job.kind) << '\n'
        << "lo," << report.job.lo.str() << '\n'
        << "hi," << report.job.hi.str() << '\n'
        << "budget," << report.job.budget << '\n'
        << "verified," << t.verified_count << '\n'
        << "excluded," << t.excluded_count << '\n'
        << "failed," << t.failed.size() << '\n'
        << "max_excursion," << csv_field(extremum_text(t.max_excursion)) << '\n'
        << "max_steps," << csv_field(extremum_text(t.max_steps)) << '\n'
        << "max_reverse_depth," << csv_field(extremum_text(t.max_reverse_depth)) << '\n'
        << "complete," << (report.complete ? "true" : "false") << '\n';
    break;
  }
}

int cmd_scan(const ScanArgs& args, std::ostream& out)
{
  const OutputFormat format = resolve_format(args.format);
  ScanOptions options;
  options.workers = args.jobs == 0 ? 1 : args.jobs;
  options.max_chunks = args.stop_after_chunks;

  ScanReport report;
  if (args.resume) {
    if (args.checkpoint.empty())
      throw UsageError("--resume requires --checkpoint");
    // Parameters not given on the command line are taken from the checkpoint.
    ScanJob invocation = read_checkpoint_file(args.checkpoint).job;
    if (!args.kind.empty())
      invocation.kind = scan_kind(args.kind);
    if (!args.from.empty())
      invocation.lo = positional_number(args.from);
    if (!args.to.empty())
      invocation.hi = positional_number(args.to);
    if (args.budget)
      invocation.budget = *args.budget;
    if (args.chunk)
      invocation.chunk_size = *args.chunk;
    if (!args.out.empty())
      invocation.output_path = args.out;
    report = resume(args.checkpoint, options, invocation);
  } else {
    if (args.kind.empty())
      throw UsageError("scan requires a kind (converge or conjecture)");
    if (args.from.empty() || args.to.empty())
      throw UsageError("scan requires --from and --to");
    ScanJob job;
    job.kind = scan_kind(args.kind);
    job.lo = positional_number(args.from);
    job.hi = positional_number(args.to);
    job.budget = args.budget.value_or(default_scan_budget(job.kind));
    job.chunk_size = args.chunk.value_or(kDefaultChunkSize);
    if (!args.checkpoint.empty())
      job.checkpoint_path = args.checkpoint;
    if (!args.out.empty())
      job.output_path = args.out;
    report = scan(job, options);
  }

  emit_report(report, format, out);
  return report.totals.failed.empty() ? kExitOk : kExitVerificationFailed;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const std::string& suite, std::optional<std::uint64_t> max, const std::string& format_flag,
               std::ostream& out)
{
  const OutputFormat format = resolve_format(format_flag);
  if (!is_suite(suite))
    throw UsageError("unknown suite '" + suite + "'");
  const std::vector<PropertyResult> results = run_suite(suite, max);

  bool all_passed = true;
  if (format == OutputFormat::Csv)
    out << "suite,property,passed,checked,counterexample\n";
  for (const PropertyResult& r : results) {
    all_passed = all_passed && r.passed;
    switch (format) {
    case OutputFormat::Text:
      out << (r.passed ? "PASS " : "FAIL ") << r.suite << ": " << r.property << " (checked " << r.checked << ")";
      if (r.counterexample)
        out << " counterexample: " << *r.counterexample;
      out << '\n';
      break;
    case OutputFormat::JsonRecords:
      out << json{{"record", "property"},
                  {"suite", r.suite},
                  {"property", r.property},
                  {"passed", r.passed},
                  {"checked", r.checked},
                  {"counterexample", r.counterexample ? json(*r.counterexample) : json(nullptr)}}
                 .dump()
          << '\n';
      break;
    case OutputFormat::Csv:
      out << csv_field(r.suite) << ',' << csv_field(r.property) << ',' << (r.passed ? "true" : "false") << ','
          << r.checked << ',' << csv_field(r.counterexample.value_or("")) << '\n';
      break;
    }
  }
  return all_passed ? kExitOk : kExitVerificationFailed;
}

} // namespace

int exit_code_for(StopReason reason)
{
  switch (reason) {
  case StopReason::ReachedOne:
  case StopReason::ReachedMultipleOf3:
  case StopReason::NoPredecessor:
    return kExitOk;
  case StopReason::BudgetExhausted:
    return kExitBudgetExhausted;
  case StopReason::CycleDetected:
    return kExitCycleDetected;
  }
  return kExitVerificationFailed;
}

std::optional<OutputFormat> parse_format(std::string_view text)
{
  if (text == "text")
    return OutputFormat::Text;
  if (text == "json" || text == "json-records")
    return OutputFormat::JsonRecords;
  if (text == "csv")
    return OutputFormat::Csv;
  return std::nullopt;
}

std::string csv_field(std::string_view value)
{
  if (value.find_first_of(",\"\r\n") == std::string_view::npos)
    return std::string(value);
  std::string quoted = "\"";
  for (char c : value) {
    if (c == '"')
      quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Collatz sequences, predecessors, binary tails and reverse sequences", "collatz"};
  app.require_subcommand(1);
  const std::string format_help = "Output format: text, json or csv (default from $COLLATZ_FORMAT, else text)";

  SeqArgs seq_args;
  auto* seq = app.add_subcommand("seq", "Print the Collatz sequence of n, stopping at the first 1");
  seq->add_option("n", seq_args.n, "Starting number (decimal or 0x hex)")->required();
  seq->add_flag("--odd-only", seq_args.odd_only, "Print only the odd terms");
  seq->add_option("--limit", seq_args.limit, "Maximum number of terms");
  seq->add_option("--format", seq_args.format, format_help);

  ReverseArgs reverse_args;
  auto* reverse = app.add_subcommand("reverse", "Print the reverse Collatz sequence of n");
  reverse->add_option("n", reverse_args.n, "Starting number (decimal or 0x hex)")->required();
  reverse->add_option("--budget", reverse_args.budget, "Maximum number of odd terms");
  reverse->add_flag("--odd-only", reverse_args.odd_only, "Print only the odd terms");
  reverse->add_flag("--complete", reverse_args.complete, "Print the complete sequence (odd n)");
  reverse->add_option("--format", reverse_args.format, format_help);

  std::string analyze_n;
  std::string analyze_format;
  auto* analyze = app.add_subcommand("analyze", "Tail, predicted iterates and predecessor of an odd n");
  analyze->add_option("n", analyze_n, "Odd number (decimal or 0x hex)")->required();
  analyze->add_option("--format", analyze_format, format_help);

  ScanArgs scan_args;
  auto* scan_cmd = app.add_subcommand("scan", "Verify a range: converge (forward) or conjecture (reverse)");
  scan_cmd->add_option("kind", scan_args.kind, "converge or conjecture");
  scan_cmd->add_option("--from", scan_args.from, "First number of the range");
  scan_cmd->add_option("--to", scan_args.to, "Last number of the range (inclusive)");
  scan_cmd->add_option("--budget", scan_args.budget, "Odd-step limit per number");
  scan_cmd->add_option("--jobs", scan_args.jobs, "Worker threads");
  scan_cmd->add_option("--chunk", scan_args.chunk, "Numbers per work unit");
  scan_cmd->add_option("--checkpoint", scan_args.checkpoint, "Checkpoint file");
  scan_cmd->add_option("--out", scan_args.out, "Anomaly/summary record file (JSON lines)");
  scan_cmd->add_flag("--resume", scan_args.resume, "Continue from --checkpoint");
  scan_cmd->add_option("--stop-after-chunks", scan_args.stop_after_chunks, "Stop after committing this many chunks");
  scan_cmd->add_option("--format", scan_args.format, format_help);

  std::string suite;
  std::optional<std::uint64_t> verify_max;
  std::string verify_format;
  auto* verify = app.add_subcommand("verify", "Run a named property suite");
  verify->add_option("--suite", suite, "lemma22, lemma24, thm25, thm34, cor36, lemma46 or all")->required();
  verify->add_option("--max", verify_max, "Upper end of the checked range");
  verify->add_option("--format", verify_format, format_help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (seq->parsed())
      return cmd_seq(seq_args, out);
    if (reverse->parsed())
      return cmd_reverse(reverse_args, out, err);
    if (analyze->parsed())
      return cmd_analyze(analyze_n, analyze_format, out);
    if (scan_cmd->parsed())
      return cmd_scan(scan_args, out);
    if (verify->parsed())
      return cmd_verify(suite, verify_max, verify_format, out);
  } catch (const UsageError& e) {
    err << "collatz: " << e.what() << '\n';
    return kExitUsage;
  } catch (const PreconditionError& e) {
    err << "collatz: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ScanError& e) {
    err << "collatz: " << e.what() << '\n';
    switch (e.kind()) {
    case ScanError::Kind::InvalidJob:
    case ScanError::Kind::ParameterMismatch:
      return kExitUsage;
    case ScanError::Kind::Io:
    case ScanError::Kind::CorruptCheckpoint:
      return kExitIo;
    }
  }
  return kExitUsage;
}

} // namespace collatz::cli
