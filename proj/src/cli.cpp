#include "parsetactic/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "CLI11.hpp"
#include "parsetactic/classifier.hpp"
#include "parsetactic/corpus_io.hpp"
#include "parsetactic/errors.hpp"
#include "parsetactic/eval.hpp"

namespace parsetactic::cli {

namespace {

constexpr std::string_view kDefaultFractions = "0.02,0.05,0.10,0.20,0.30,1.0";
constexpr std::string_view kDefaultSegmentCounts = "2,3,5,7,9";
constexpr std::string_view kDefaultSizes = "10,100,1000,all";
constexpr std::string_view kDefaultThresholds = "0:0.05:0.5";

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_real(std::string_view text) {
  const std::string s(trim(text));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) throw ConfigError("not a number: '" + s + "'");
  return v;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  return in;
}

// Writes to the --out file when one is given, to `fallback` otherwise.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw FormatError("cannot write '" + path + "'");
    stream_ = file_.get();
  }

  std::ostream& stream() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

std::string fmt_metric(const std::optional<double>& v) {
  return v ? fmt::format("{:.6f}", round_output(*v)) : std::string("NA");
}

std::vector<CorpusRecord> load_corpus(const std::string& path) {
  auto in = open_input(path);
  try {
    return read_corpus(in);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

PrototypeSet load_prototypes(const std::string& path, const TacticNameTable& names) {
  auto in = open_input(path);
  try {
    return read_prototypes(in, names);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

PrototypeConfig prototype_config(const RunConfig& config) {
  PrototypeConfig pc;
  pc.method = config.method;
  pc.set_fraction = config.set_fraction;
  pc.segment_count = config.segments;
  pc.seed = config.seed;
  pc.threads = config.threads;
  return pc;
}

PrototypeSet build_checked(std::span<const LabeledArgument> corpus, const RunConfig& config, std::ostream& err) {
  PrototypeSet set = build_prototypes(corpus, prototype_config(config));
  for (const auto& [a, b] : set.duplicate_prototypes()) {
    fmt::print(err, "warning: prototypes for {} and {} are identical\n", tactic_name(a), tactic_name(b));
  }
  return set;
}

void print_report(std::ostream& out, const MetricsReport& report, std::size_t skipped) {
  fmt::print(out, "Evaluated {} arguments ({} rejected as non-arguments)\n", report.tally.total,
             report.tally.rejected());
  if (report.threshold) fmt::print(out, "Similarity threshold: {:.6f}\n", *report.threshold);
  if (skipped > 0) fmt::print(out, "Skipped {} records without gold labels\n", skipped);
  fmt::print(out, "\n{:<22} {:>9} {:>9} {:>6} {:>10} {:>10} {:>10}\n", "class", "retrieved", "relevant", "hits",
             "precision", "recall", "f1");
  for (const ClassMetrics& c : report.classes) {
    fmt::print(out, "{:<22} {:>9} {:>9} {:>6} {:>10} {:>10} {:>10}\n", c.name, c.retrieved, c.relevant, c.hits,
               fmt_metric(c.metrics.precision), fmt_metric(c.metrics.recall), fmt_metric(c.metrics.f1));
  }
  fmt::print(out, "{:<22} {:>9} {:>9} {:>6} {:>10} {:>10} {:>10}\n", "macro", "", "", "",
             fmt_metric(report.macro.precision), fmt_metric(report.macro.recall), fmt_metric(report.macro.f1));

  fmt::print(out, "\nPer-category accuracy\n");
  for (const auto& [t, acc] : report.per_category_accuracy) {
    fmt::print(out, "{:<22} {:>10}\n", tactic_name(t), fmt_metric(acc));
  }
  fmt::print(out, "\nTactic distribution (% of classified arguments)\n");
  double total = 0.0;
  for (const auto& [t, pct] : report.distribution) {
    fmt::print(out, "{:<22} {:>10}\n", tactic_name(t), fmt_metric(pct));
    total += pct;
  }
  fmt::print(out, "{:<22} {:>10}\n", "total", fmt_metric(total));
}

void add_prototype_options(CLI::App* cmd, RunConfig& config, std::string& method) {
  cmd->add_option("--method", method, "Prototype construction: median or synthetic")
      ->check(CLI::IsMember({"median", "synthetic"}))
      ->capture_default_str();
  cmd->add_option("--fraction", config.set_fraction, "Fraction of each category sampled")->capture_default_str();
  cmd->add_option("--segments", config.segments, "Segments per synthetic prototype")->capture_default_str();
  cmd->add_option("--seed", config.seed, "Sampling seed")->capture_default_str();
}

void add_threshold_options(CLI::App* cmd, std::optional<double>& threshold, bool& reject) {
  cmd->add_option("--threshold", threshold, "Reject inputs whose best similarity is below this value");
  cmd->add_flag("--reject", reject, "Enable rejection at the default threshold 0.1");
}

struct Args {
  std::string input;
  std::string prototypes;
  std::string out;
  std::string method = "synthetic";
  std::optional<double> threshold;
  bool reject = false;
  bool binary = false;
  bool exclude_non_argument = false;
  std::string kind;
  std::string fractions{kDefaultFractions};
  std::string segment_counts{kDefaultSegmentCounts};
  std::string sizes;
  std::string thresholds{kDefaultThresholds};
  std::size_t trials = 5;
};

void finish_config(const Args& args, RunConfig& config) {
  config.method = args.method == "median" ? PrototypeMethod::Median : PrototypeMethod::Synthetic;
  if (!(config.set_fraction > 0.0 && config.set_fraction <= 1.0)) {
    throw InvalidFraction("--fraction must lie in (0, 1]");
  }
  if (config.segments == 0) throw InvalidSegmentCount("--segments must be positive");
  config.threshold = args.threshold;
  if (args.reject && !config.threshold) config.threshold = kDefaultRejectionThreshold;
  if (config.threshold) validate_threshold(*config.threshold);
}

EvalOptions eval_options(const Args& args, const RunConfig& config) {
  EvalOptions options;
  options.threshold = config.threshold;
  options.binary = args.binary;
  options.non_argument_in_macro = !args.exclude_non_argument;
  options.threads = config.threads;
  return options;
}

int cmd_build(const Args& args, const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto records = load_corpus(args.input);
  const auto corpus = to_labeled_arguments(records, config.names);
  const PrototypeSet set = build_checked(corpus, config, err);
  Output o(args.out, out);
  write_prototypes(o.stream(), set);
  return kExitOk;
}

int cmd_classify(const Args& args, const RunConfig& config, std::ostream& out, std::ostream& err) {
  const PrototypeSet set = load_prototypes(args.prototypes, config.names);
  auto in = open_input(args.input);

  struct Pending {
    std::string id;
    std::size_t line;
    std::optional<std::string> error;
  };
  std::vector<Pending> pending;
  std::vector<ParseString> parses;
  std::vector<std::size_t> parse_slot;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    Pending p{"", line_no, std::nullopt};
    try {
      const CorpusRecord rec = parse_corpus_record(line);
      p.id = rec.id;
      parses.push_back(record_parse_string(rec));
      parse_slot.push_back(pending.size());
    } catch (const FormatError& e) {
      p.error = e.what();
    }
    pending.push_back(std::move(p));
  }

  const auto results = Classifier(set).classify_batch(parses, config.threshold, config.threads);
  std::vector<const Classification*> by_record(pending.size(), nullptr);
  for (std::size_t i = 0; i < results.size(); ++i) by_record[parse_slot[i]] = &results[i];

  Output o(args.out, out);
  std::size_t failures = 0;
  for (std::size_t i = 0; i < pending.size(); ++i) {
    if (pending[i].error) {
      ++failures;
      fmt::print(err, "{}: line {}: {}\n", args.input, pending[i].line, *pending[i].error);
      o.stream() << format_record_error(pending[i].id, pending[i].line, *pending[i].error) << '\n';
    } else {
      o.stream() << format_classification(pending[i].id, *by_record[i]) << '\n';
    }
  }
  if (failures > 0) {
    fmt::print(err, "{} of {} records could not be classified\n", failures, pending.size());
    return kExitFormat;
  }
  return kExitOk;
}

int cmd_evaluate(const Args& args, const RunConfig& config, std::ostream& out, std::ostream&) {
  const auto records = load_corpus(args.input);
  const PrototypeSet set = load_prototypes(args.prototypes, config.names);
  const auto corpus = to_labeled_arguments(records, config.names);
  if (corpus.empty()) throw EmptyEvaluation("no record in '" + args.input + "' carries a gold label");

  const MetricsReport report = evaluate(corpus, set, eval_options(args, config));
  print_report(out, report, records.size() - corpus.size());
  if (!args.out.empty()) {
    Output o(args.out, out);
    write_report(o.stream(), report);
  }
  return kExitOk;
}

int cmd_sweep(const Args& args, const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto records = load_corpus(args.input);
  const auto corpus = to_labeled_arguments(records, config.names);
  if (corpus.empty()) throw EmptyEvaluation("no record in '" + args.input + "' carries a gold label");
  const EvalOptions options = eval_options(args, config);

  auto prototypes = [&] {
    return args.prototypes.empty() ? build_checked(corpus, config, err)
                                   : load_prototypes(args.prototypes, config.names);
  };

  std::ostringstream table;
  std::size_t rows = 0;
  if (args.kind == "params") {
    const auto fractions = parse_real_list(args.fractions);
    const auto segments = parse_count_list(args.segment_counts);
    const auto cells = parameter_sweep(corpus, config.method, fractions, segments, args.trials, config.seed, options);
    table << "fraction\tsegments\tmean_precision\tmean_recall\tmean_f1";
    for (std::size_t t = 0; t < args.trials; ++t) table << "\tf1_trial" << t + 1;
    table << '\n';
    for (const SweepCell& c : cells) {
      table << fmt::format("{:.6f}\t{}\t{}\t{}\t{}", c.fraction, c.segments ? std::to_string(*c.segments) : "-",
                           fmt_metric(c.mean.precision), fmt_metric(c.mean.recall), fmt_metric(c.mean.f1));
      for (const PrfMetrics& m : c.trials) table << '\t' << fmt_metric(m.f1);
      table << '\n';
    }
    rows = cells.size();
  } else if (args.kind == "sensitivity") {
    std::vector<std::size_t> sizes;
    if (args.sizes.empty()) {
      // Default sizes that exceed the corpus are dropped rather than rejected.
      for (std::size_t s : parse_count_list(kDefaultSizes)) {
        if (s == kAllInstances || s <= corpus.size()) sizes.push_back(s);
      }
    } else {
      sizes = parse_count_list(args.sizes);
    }
    const auto result = sensitivity_run(corpus, prototypes(), sizes, args.trials, config.seed, options);
    table << "size\tcount\tmean_precision\tmean_recall\tmean_f1";
    for (std::size_t t = 0; t < args.trials; ++t) table << "\tf1_trial" << t + 1;
    table << '\n';
    for (const SensitivityRow& r : result) {
      table << fmt::format("{}\t{}\t{}\t{}\t{}", r.requested == kAllInstances ? "all" : std::to_string(r.requested),
                           r.count, fmt_metric(r.mean.precision), fmt_metric(r.mean.recall), fmt_metric(r.mean.f1));
      for (const PrfMetrics& m : r.trials) table << '\t' << fmt_metric(m.f1);
      table << '\n';
    }
    rows = result.size();
  } else if (args.kind == "threshold") {
    const auto thresholds = parse_real_list(args.thresholds);
    const auto result = threshold_sweep(corpus, prototypes(), thresholds, options);
    table << "threshold\tprecision\trecall\tf1\trejected\n";
    for (const ThresholdRow& r : result) {
      table << fmt::format("{:.6f}\t{}\t{}\t{}\t{}\n", r.threshold, fmt_metric(r.macro.precision),
                           fmt_metric(r.macro.recall), fmt_metric(r.macro.f1), r.rejected);
    }
    rows = result.size();
  } else {
    throw ConfigError("--kind must be params, sensitivity or threshold");
  }

  Output o(args.out, out);
  o.stream() << table.str();
  if (!args.out.empty()) fmt::print(err, "wrote {} rows to {}\n", rows, args.out);
  return kExitOk;
}

}  // namespace

std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> values;
  if (trim(text).empty()) throw ConfigError("empty number list");
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ConfigError("range must be start:step:stop");
    const double start = parse_real(parts[0]);
    const double step = parse_real(parts[1]);
    const double stop = parse_real(parts[2]);
    if (!(step > 0.0) || stop < start) throw ConfigError("range needs a positive step and stop >= start");
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) {
      // Rounded to 12 decimals so 0.05 * 3 prints as 0.15.
      values.push_back(std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12);
    }
    return values;
  }
  for (std::string_view part : split(text, ',')) values.push_back(parse_real(part));
  return values;
}

std::vector<std::size_t> parse_count_list(std::string_view text) {
  std::vector<std::size_t> values;
  if (trim(text).empty()) throw ConfigError("empty count list");
  for (std::string_view part : split(text, ',')) {
    const std::string s(trim(part));
    if (s == "all" || s == "ALL") {
      values.push_back(kAllInstances);
      continue;
    }
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
      throw ConfigError("not a count: '" + s + "'");
    }
    values.push_back(std::stoull(s));
  }
  return values;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Classify arguments into persuasion tactics from their constituency parse structure"};
  app.require_subcommand(1);

  RunConfig config;
  Args a;
  app.add_option("--threads", config.threads, "Worker threads (0: all cores); never changes results");

  auto* build = app.add_subcommand("build", "Build the 14 tactic prototypes from a labelled corpus");
  build->add_option("corpus", a.input, "Corpus file (JSON lines)")->required();
  build->add_option("--out", a.out, "Prototype file to write (default: stdout)");
  add_prototype_options(build, config, a.method);

  auto* classify = app.add_subcommand("classify", "Classify every record of a corpus file");
  classify->add_option("input", a.input, "Corpus file (JSON lines)")->required();
  classify->add_option("--prototypes", a.prototypes, "Prototype file")->required();
  classify->add_option("--out", a.out, "Results file to write (default: stdout)");
  add_threshold_options(classify, a.threshold, a.reject);

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score prototypes against a gold-labelled corpus");
  evaluate_cmd->add_option("corpus", a.input, "Corpus file (JSON lines)")->required();
  evaluate_cmd->add_option("--prototypes", a.prototypes, "Prototype file")->required();
  evaluate_cmd->add_option("--out", a.out, "Machine-readable report to write");
  add_threshold_options(evaluate_cmd, a.threshold, a.reject);
  evaluate_cmd->add_flag("--binary", a.binary, "Score argument vs non-argument only");
  evaluate_cmd->add_flag("--exclude-non-argument", a.exclude_non_argument,
                         "Leave the non-argument class out of the macro averages");

  auto* sweep = app.add_subcommand("sweep", "Parameter, sensitivity or threshold sweeps");
  sweep->add_option("corpus", a.input, "Corpus file (JSON lines)")->required();
  sweep->add_option("--kind", a.kind, "params | sensitivity | threshold")
      ->required()
      ->check(CLI::IsMember({"params", "sensitivity", "threshold"}));
  sweep->add_option("--prototypes", a.prototypes, "Prototype file (sensitivity/threshold; default: build from corpus)");
  sweep->add_option("--out", a.out, "Data file to write (default: stdout)");
  sweep->add_option("--fractions", a.fractions, "Set fractions for --kind params")->capture_default_str();
  sweep->add_option("--segment-counts", a.segment_counts, "Segment counts for --kind params")->capture_default_str();
  sweep->add_option("--sizes", a.sizes, "Sample sizes for --kind sensitivity (default: 10,100,1000,all)");
  sweep->add_option("--thresholds", a.thresholds, "Thresholds for --kind threshold (list or start:step:stop)")
      ->capture_default_str();
  sweep->add_option("--trials", a.trials, "Trials per cell or size")->capture_default_str();
  add_prototype_options(sweep, config, a.method);
  add_threshold_options(sweep, a.threshold, a.reject);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    finish_config(a, config);
    if (*build) return cmd_build(a, config, out, err);
    if (*classify) return cmd_classify(a, config, out, err);
    if (*evaluate_cmd) return cmd_evaluate(a, config, out, err);
    return cmd_sweep(a, config, out, err);
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitFormat;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace parsetactic::cli
