#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "parsetactic/editdist.hpp"
#include "parsetactic/prototype.hpp"
#include "parsetactic/tactic.hpp"
#include "parsetactic/treebank.hpp"

namespace parsetactic {

inline constexpr double kDefaultRejectionThreshold = 0.1;

struct Classification {
  Label decision;  // std::nullopt: rejected as a non-argument
  std::array<double, kTacticCount> distances{};  // normalized, per tactic
  double best_similarity = 0.0;                  // 1 - min(distances)

  friend bool operator==(const Classification&, const Classification&) = default;
};

// Nearest-prototype classifier. Holds the prototypes in compiled form; the
// object is immutable after construction and safe to share across threads.
class Classifier {
 public:
  explicit Classifier(const PrototypeSet& prototypes);

  // Decision is the tactic with the smallest normalized distance; ties go to
  // the tactic listed first.
  Classification classify(const ParseString& arg) const;

  // Rejects the argument when its similarity to every prototype is strictly
  // below threshold. Throws InvalidThreshold outside [0, 1].
  Classification classify(const ParseString& arg, double threshold) const;

  // Order-preserving element-wise classification, optionally with rejection.
  std::vector<Classification> classify_batch(std::span<const ParseString> args,
                                             std::optional<double> threshold = std::nullopt,
                                             unsigned threads = 0) const;

 private:
  std::vector<CompiledPattern> patterns_;
};

Classification classify(const ParseString& arg, const PrototypeSet& prototypes);

Classification classify_with_rejection(const ParseString& arg, const PrototypeSet& prototypes,
                                       double threshold = kDefaultRejectionThreshold);

std::vector<Classification> classify_batch(std::span<const ParseString> args, const PrototypeSet& prototypes,
                                           std::optional<double> threshold = std::nullopt,
                                           unsigned threads = 0);

void validate_threshold(double threshold);

}  // namespace parsetactic
