#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "parsetactic/classifier.hpp"
#include "parsetactic/corpus.hpp"
#include "parsetactic/prototype.hpp"
#include "parsetactic/tactic.hpp"

namespace parsetactic {

// Tally buckets: the 14 tactics followed by the non-argument bucket.
inline constexpr std::size_t kBucketCount = kTacticCount + 1;
inline constexpr std::size_t kNonArgumentBucket = kTacticCount;

constexpr std::size_t bucket_of(const Label& label) noexcept {
  return label ? index_of(*label) : kNonArgumentBucket;
}

// One-vs-rest counts per bucket plus the full gold x decision matrix.
struct ConfusionTally {
  std::array<std::size_t, kBucketCount> retrieved{};
  std::array<std::size_t, kBucketCount> relevant{};
  std::array<std::size_t, kBucketCount> hits{};
  std::array<std::array<std::size_t, kBucketCount>, kBucketCount> matrix{};  // [gold][decision]
  std::size_t total = 0;

  void add(const Label& gold, const Label& decision);
  std::size_t rejected() const noexcept { return retrieved[kNonArgumentBucket]; }

  friend bool operator==(const ConfusionTally&, const ConfusionTally&) = default;
};

// Precision, recall and F1. A value is std::nullopt when its denominator is
// zero; F1 is defined whenever both precision and recall are.
struct PrfMetrics {
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;

  friend bool operator==(const PrfMetrics&, const PrfMetrics&) = default;
};

PrfMetrics prf_from_counts(std::size_t retrieved, std::size_t relevant, std::size_t hits);

PrfMetrics tactic_metrics(const ConfusionTally& tally, Tactic t);

struct ClassMetrics {
  std::string name;
  std::size_t retrieved = 0;
  std::size_t relevant = 0;
  std::size_t hits = 0;
  PrfMetrics metrics;

  friend bool operator==(const ClassMetrics&, const ClassMetrics&) = default;
};

struct EvalOptions {
  // Enables non-argument rejection at this similarity threshold.
  std::optional<double> threshold;
  // Merge all tactics into a single "persuasive" class (argument vs
  // non-argument setting).
  bool binary = false;
  // Whether the non-argument class takes part in the macro averages when it
  // is present (threshold set or non-argument gold labels in the corpus).
  bool non_argument_in_macro = true;
  unsigned threads = 0;
};

struct MetricsReport {
  std::vector<ClassMetrics> classes;  // the classes averaged into `macro`
  PrfMetrics macro;
  std::map<Tactic, double> per_category_accuracy;
  std::map<Tactic, double> distribution;  // percent of non-rejected decisions
  ConfusionTally tally;
  std::optional<double> threshold;
  bool binary = false;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

// Mean of the defined values; std::nullopt if none is defined.
std::optional<double> mean_defined(std::span<const std::optional<double>> values);

// For each tactic with at least one gold argument, the fraction of those
// arguments classified as that tactic. Non-argument golds are skipped.
std::map<Tactic, double> per_category_accuracy(std::span<const Classification> results,
                                               std::span<const Label> golds);

// Percentage of each tactic among the non-rejected decisions; tactics never
// chosen are absent. Throws EmptyEvaluation for an empty input; an input in
// which everything was rejected yields an empty map.
std::map<Tactic, double> tactic_distribution(std::span<const Classification> results);

// Builds the report from finished classifications.
MetricsReport summarize(std::span<const Classification> results, std::span<const Label> golds,
                        const EvalOptions& options = {});

// Classifies the corpus and summarizes. Throws EmptyEvaluation.
MetricsReport evaluate(std::span<const LabeledArgument> corpus, const PrototypeSet& prototypes,
                       const EvalOptions& options = {});

// Stands for "every instance" in a sensitivity size list.
inline constexpr std::size_t kAllInstances = std::numeric_limits<std::size_t>::max();

struct SensitivityRow {
  std::size_t requested = 0;  // may be kAllInstances
  std::size_t count = 0;      // arguments per trial
  std::vector<PrfMetrics> trials;
  PrfMetrics mean;
};

// For each size, evaluates `trials` random subsets of the corpus (drawn from
// seed and the trial index) against fixed prototypes.
// Throws InvalidSampleSize when a size exceeds the corpus.
std::vector<SensitivityRow> sensitivity_run(std::span<const LabeledArgument> corpus, const PrototypeSet& prototypes,
                                            std::span<const std::size_t> sizes, std::size_t trials,
                                            std::uint64_t seed, const EvalOptions& options = {});

struct SweepCell {
  double fraction = 0.0;
  std::optional<std::size_t> segments;  // absent for the median method
  std::vector<PrfMetrics> trials;
  PrfMetrics mean;
};

// Rebuilds prototypes from the corpus for every (fraction, segments) cell and
// trial, evaluates them on the whole corpus and averages over trials. The
// median method ignores segment_counts and yields one cell per fraction.
std::vector<SweepCell> parameter_sweep(std::span<const LabeledArgument> corpus, PrototypeMethod method,
                                       std::span<const double> fractions,
                                       std::span<const std::size_t> segment_counts, std::size_t trials,
                                       std::uint64_t seed, const EvalOptions& options = {});

struct ThresholdRow {
  double threshold = 0.0;
  PrfMetrics macro;
  std::size_t rejected = 0;
};

// Evaluates with rejection at each threshold, rows in input order. The corpus
// must contain at least one non-argument.
std::vector<ThresholdRow> threshold_sweep(std::span<const LabeledArgument> corpus, const PrototypeSet& prototypes,
                                          std::span<const double> thresholds, const EvalOptions& options = {});

}  // namespace parsetactic
