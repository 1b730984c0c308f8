#include "parsetactic/classifier.hpp"

#include <string>

#include "parsetactic/errors.hpp"
#include "parsetactic/parallel.hpp"

namespace parsetactic {

void validate_threshold(double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw InvalidThreshold("threshold must lie in [0, 1], got " + std::to_string(threshold));
  }
}

Classifier::Classifier(const PrototypeSet& prototypes) {
  patterns_.reserve(kTacticCount);
  for (const ParseString& p : prototypes.prototypes) patterns_.emplace_back(p);
}

Classification Classifier::classify(const ParseString& arg) const {
  Classification result;
  std::size_t best = 0;
  for (std::size_t i = 0; i < kTacticCount; ++i) {
    result.distances[i] = patterns_[i].normalized_distance(arg);
    if (result.distances[i] < result.distances[best]) best = i;
  }
  result.decision = kAllTactics[best];
  result.best_similarity = 1.0 - result.distances[best];
  return result;
}

Classification Classifier::classify(const ParseString& arg, double threshold) const {
  validate_threshold(threshold);
  Classification result = classify(arg);
  // best_similarity is the largest similarity, so "all below" reduces to it.
  if (result.best_similarity < threshold) result.decision = std::nullopt;
  return result;
}

std::vector<Classification> Classifier::classify_batch(std::span<const ParseString> args,
                                                       std::optional<double> threshold,
                                                       unsigned threads) const {
  if (threshold) validate_threshold(*threshold);
  std::vector<Classification> out(args.size());
  parallel_for(args.size(), threads, [&](std::size_t i) {
    out[i] = threshold ? classify(args[i], *threshold) : classify(args[i]);
  });
  return out;
}

Classification classify(const ParseString& arg, const PrototypeSet& prototypes) {
  return Classifier(prototypes).classify(arg);
}

Classification classify_with_rejection(const ParseString& arg, const PrototypeSet& prototypes, double threshold) {
  validate_threshold(threshold);
  return Classifier(prototypes).classify(arg, threshold);
}

std::vector<Classification> classify_batch(std::span<const ParseString> args, const PrototypeSet& prototypes,
                                           std::optional<double> threshold, unsigned threads) {
  return Classifier(prototypes).classify_batch(args, threshold, threads);
}

}  // namespace parsetactic
