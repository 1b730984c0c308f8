#include "parsetactic/eval.hpp"

#include <string>

#include "parsetactic/errors.hpp"
#include "parsetactic/parallel.hpp"
#include "parsetactic/random.hpp"

namespace parsetactic {

namespace {

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

PrfMetrics mean_of(std::span<const PrfMetrics> rows) {
  std::vector<std::optional<double>> p, r, f;
  for (const PrfMetrics& m : rows) {
    p.push_back(m.precision);
    r.push_back(m.recall);
    f.push_back(m.f1);
  }
  return {mean_defined(p), mean_defined(r), mean_defined(f)};
}

PrfMetrics macro_of(std::span<const ClassMetrics> classes) {
  std::vector<PrfMetrics> rows;
  rows.reserve(classes.size());
  for (const ClassMetrics& c : classes) rows.push_back(c.metrics);
  return mean_of(rows);
}

ClassMetrics make_class(std::string name, std::size_t retrieved, std::size_t relevant, std::size_t hits) {
  return {std::move(name), retrieved, relevant, hits, prf_from_counts(retrieved, relevant, hits)};
}

std::vector<Label> golds_of(std::span<const LabeledArgument> corpus) {
  std::vector<Label> golds;
  golds.reserve(corpus.size());
  for (const LabeledArgument& arg : corpus) golds.push_back(arg.gold);
  return golds;
}

std::vector<ParseString> parses_of(std::span<const LabeledArgument> corpus) {
  std::vector<ParseString> parses;
  parses.reserve(corpus.size());
  for (const LabeledArgument& arg : corpus) parses.push_back(arg.parse);
  return parses;
}

Classification reject_below(Classification c, double threshold) {
  if (c.best_similarity < threshold) c.decision = std::nullopt;
  return c;
}

}  // namespace

void ConfusionTally::add(const Label& gold, const Label& decision) {
  const std::size_t g = bucket_of(gold);
  const std::size_t d = bucket_of(decision);
  ++relevant[g];
  ++retrieved[d];
  if (g == d) ++hits[g];
  ++matrix[g][d];
  ++total;
}

PrfMetrics prf_from_counts(std::size_t retrieved, std::size_t relevant, std::size_t hits) {
  PrfMetrics m;
  m.precision = ratio(hits, retrieved);
  m.recall = ratio(hits, relevant);
  if (m.precision && m.recall) {
    const double sum = *m.precision + *m.recall;
    // Both defined and both zero: no hits at all, the limit of 2PR/(P+R) is 0.
    m.f1 = sum == 0.0 ? 0.0 : 2.0 * *m.precision * *m.recall / sum;
  }
  return m;
}

PrfMetrics tactic_metrics(const ConfusionTally& tally, Tactic t) {
  const std::size_t i = index_of(t);
  return prf_from_counts(tally.retrieved[i], tally.relevant[i], tally.hits[i]);
}

std::optional<double> mean_defined(std::span<const std::optional<double>> values) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& v : values) {
    if (v) {
      sum += *v;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

std::map<Tactic, double> per_category_accuracy(std::span<const Classification> results,
                                               std::span<const Label> golds) {
  std::array<std::size_t, kTacticCount> total{};
  std::array<std::size_t, kTacticCount> correct{};
  const std::size_t n = std::min(results.size(), golds.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (!golds[i]) continue;
    const std::size_t t = index_of(*golds[i]);
    ++total[t];
    if (results[i].decision == golds[i]) ++correct[t];
  }
  std::map<Tactic, double> acc;
  for (Tactic t : kAllTactics) {
    if (total[index_of(t)] > 0) acc[t] = *ratio(correct[index_of(t)], total[index_of(t)]);
  }
  return acc;
}

std::map<Tactic, double> tactic_distribution(std::span<const Classification> results) {
  if (results.empty()) throw EmptyEvaluation("no classifications to summarize");
  std::array<std::size_t, kTacticCount> counts{};
  std::size_t classified = 0;
  for (const Classification& c : results) {
    if (!c.decision) continue;
    ++counts[index_of(*c.decision)];
    ++classified;
  }
  std::map<Tactic, double> dist;
  for (Tactic t : kAllTactics) {
    if (counts[index_of(t)] > 0) {
      dist[t] = 100.0 * static_cast<double>(counts[index_of(t)]) / static_cast<double>(classified);
    }
  }
  return dist;
}

MetricsReport summarize(std::span<const Classification> results, std::span<const Label> golds,
                        const EvalOptions& options) {
  if (results.empty()) throw EmptyEvaluation("evaluation corpus is empty");
  if (results.size() != golds.size()) throw EmptyEvaluation("results and gold labels differ in length");

  MetricsReport report;
  report.threshold = options.threshold;
  report.binary = options.binary;
  for (std::size_t i = 0; i < results.size(); ++i) report.tally.add(golds[i], results[i].decision);
  const ConfusionTally& tally = report.tally;

  const bool non_argument_present = options.threshold.has_value() || tally.relevant[kNonArgumentBucket] > 0;
  const bool non_argument_class = non_argument_present && options.non_argument_in_macro;

  if (options.binary) {
    std::size_t hits = 0;
    for (std::size_t g = 0; g < kTacticCount; ++g) {
      for (std::size_t d = 0; d < kTacticCount; ++d) hits += tally.matrix[g][d];
    }
    report.classes.push_back(make_class("persuasive", tally.total - tally.retrieved[kNonArgumentBucket],
                                        tally.total - tally.relevant[kNonArgumentBucket], hits));
  } else {
    for (Tactic t : kAllTactics) {
      const std::size_t i = index_of(t);
      report.classes.push_back(
          make_class(std::string(tactic_name(t)), tally.retrieved[i], tally.relevant[i], tally.hits[i]));
    }
  }
  if (non_argument_class) {
    report.classes.push_back(make_class(std::string(kNonArgumentName), tally.retrieved[kNonArgumentBucket],
                                        tally.relevant[kNonArgumentBucket], tally.hits[kNonArgumentBucket]));
  }

  report.macro = macro_of(report.classes);
  report.per_category_accuracy = per_category_accuracy(results, golds);
  report.distribution = tactic_distribution(results);
  return report;
}

MetricsReport evaluate(std::span<const LabeledArgument> corpus, const PrototypeSet& prototypes,
                       const EvalOptions& options) {
  if (corpus.empty()) throw EmptyEvaluation("evaluation corpus is empty");
  const auto parses = parses_of(corpus);
  const auto results = Classifier(prototypes).classify_batch(parses, options.threshold, options.threads);
  return summarize(results, golds_of(corpus), options);
}

std::vector<SensitivityRow> sensitivity_run(std::span<const LabeledArgument> corpus, const PrototypeSet& prototypes,
                                            std::span<const std::size_t> sizes, std::size_t trials,
                                            std::uint64_t seed, const EvalOptions& options) {
  if (corpus.empty()) throw EmptyEvaluation("evaluation corpus is empty");
  for (std::size_t size : sizes) {
    if (size == 0 || (size != kAllInstances && size > corpus.size())) {
      throw InvalidSampleSize("sample size " + std::to_string(size) + " is outside 1.." +
                              std::to_string(corpus.size()));
    }
  }

  // Prototypes are fixed, so each argument is classified once and subsets
  // reuse the decisions.
  const auto parses = parses_of(corpus);
  const auto all_results = Classifier(prototypes).classify_batch(parses, options.threshold, options.threads);
  const auto all_golds = golds_of(corpus);

  std::vector<SensitivityRow> rows;
  for (std::size_t size : sizes) {
    SensitivityRow row;
    row.requested = size;
    row.count = size == kAllInstances ? corpus.size() : size;
    for (std::size_t trial = 0; trial < trials; ++trial) {
      std::vector<Classification> results;
      std::vector<Label> golds;
      for (std::size_t i : choose_indices(corpus.size(), row.count, derive_seed(derive_seed(seed, trial), row.count))) {
        results.push_back(all_results[i]);
        golds.push_back(all_golds[i]);
      }
      row.trials.push_back(summarize(results, golds, options).macro);
    }
    row.mean = mean_of(row.trials);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SweepCell> parameter_sweep(std::span<const LabeledArgument> corpus, PrototypeMethod method,
                                       std::span<const double> fractions,
                                       std::span<const std::size_t> segment_counts, std::size_t trials,
                                       std::uint64_t seed, const EvalOptions& options) {
  if (corpus.empty()) throw EmptyEvaluation("evaluation corpus is empty");
  for (double f : fractions) {
    if (!(f > 0.0 && f <= 1.0)) throw InvalidFraction("set fraction must lie in (0, 1], got " + std::to_string(f));
  }

  std::vector<SweepCell> cells;
  for (double f : fractions) {
    if (method == PrototypeMethod::Median) {
      cells.push_back({f, std::nullopt, {}, {}});
      continue;
    }
    for (std::size_t k : segment_counts) {
      if (k == 0) throw InvalidSegmentCount("segment count must be positive");
      cells.push_back({f, k, {}, {}});
    }
  }

  std::vector<PrfMetrics> outcomes(cells.size() * trials);
  EvalOptions inner = options;
  inner.threads = 1;
  parallel_for(outcomes.size(), options.threads, [&](std::size_t job) {
    const SweepCell& cell = cells[job / trials];
    const std::size_t trial = job % trials;
    PrototypeConfig config;
    config.method = method;
    config.set_fraction = cell.fraction;
    config.segment_count = cell.segments.value_or(kDefaultSegmentCount);
    config.seed = derive_seed(seed, trial);
    config.threads = 1;
    outcomes[job] = evaluate(corpus, build_prototypes(corpus, config), inner).macro;
  });

  for (std::size_t c = 0; c < cells.size(); ++c) {
    cells[c].trials.assign(outcomes.begin() + static_cast<std::ptrdiff_t>(c * trials),
                           outcomes.begin() + static_cast<std::ptrdiff_t>((c + 1) * trials));
    cells[c].mean = mean_of(cells[c].trials);
  }
  return cells;
}

std::vector<ThresholdRow> threshold_sweep(std::span<const LabeledArgument> corpus, const PrototypeSet& prototypes,
                                          std::span<const double> thresholds, const EvalOptions& options) {
  if (corpus.empty()) throw EmptyEvaluation("evaluation corpus is empty");
  for (double t : thresholds) validate_threshold(t);
  const auto golds = golds_of(corpus);
  bool has_non_argument = false;
  for (const Label& g : golds) has_non_argument = has_non_argument || !g;
  if (!has_non_argument) throw DataError("threshold sweep needs at least one non-argument in the corpus");

  const auto parses = parses_of(corpus);
  const auto base = Classifier(prototypes).classify_batch(parses, std::nullopt, options.threads);

  std::vector<ThresholdRow> rows;
  for (double t : thresholds) {
    std::vector<Classification> results;
    results.reserve(base.size());
    for (const Classification& c : base) results.push_back(reject_below(c, t));
    EvalOptions at = options;
    at.threshold = t;
    const MetricsReport report = summarize(results, golds, at);
    rows.push_back({t, report.macro, report.tally.rejected()});
  }
  return rows;
}

}  // namespace parsetactic
