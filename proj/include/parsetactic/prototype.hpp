#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "parsetactic/corpus.hpp"
#include "parsetactic/tactic.hpp"
#include "parsetactic/treebank.hpp"

namespace parsetactic {

enum class PrototypeMethod : std::uint8_t { Median, Synthetic };

inline constexpr double kDefaultSetFraction = 0.30;
inline constexpr std::size_t kDefaultSegmentCount = 9;

std::string_view method_name(PrototypeMethod m) noexcept;

// One prototype parse string per tactic plus the parameters that produced it.
struct PrototypeSet {
  std::array<ParseString, kTacticCount> prototypes;
  PrototypeMethod method = PrototypeMethod::Median;
  double set_fraction = kDefaultSetFraction;
  std::size_t segment_count = kDefaultSegmentCount;  // meaningful for Synthetic only
  std::uint64_t seed = 0;
  std::array<std::size_t, kTacticCount> source_counts{};

  const ParseString& operator[](Tactic t) const noexcept { return prototypes[index_of(t)]; }
  ParseString& operator[](Tactic t) noexcept { return prototypes[index_of(t)]; }

  // Pairs of tactics whose prototypes are identical token sequences. Such
  // pairs make self-classification ties unavoidable.
  std::vector<std::pair<Tactic, Tactic>> duplicate_prototypes() const;

  friend bool operator==(const PrototypeSet&, const PrototypeSet&) = default;
};

struct PrototypeConfig {
  PrototypeMethod method = PrototypeMethod::Median;
  double set_fraction = kDefaultSetFraction;
  std::size_t segment_count = kDefaultSegmentCount;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: hardware concurrency; never affects the result
};

// Index of the set median: the element with the smallest sum of unit-cost
// edit distances to all others. Ties go to the shorter string, then to the
// lexicographically smaller rendering, then to the earlier index.
// Throws EmptyCategory.
std::size_t set_median_index(std::span<const ParseString> strings);

ParseString set_median(std::span<const ParseString> strings);

// Contiguous partition into k parts; the first (n mod k) parts get one extra
// token. Throws InvalidSegmentCount for k == 0.
std::vector<ParseString> segment(const ParseString& ps, std::size_t k);

// Concatenation of the set medians of the i-th segments, i = 1..k.
ParseString synthesize_prototype(std::span<const ParseString> strings, std::size_t k);

// Number of elements drawn from a category of n: round-half-up of
// fraction * n, at least 1.
std::size_t sample_size(std::size_t n, double fraction);

// Indices (ascending) of a uniform sample without replacement. Throws
// InvalidFraction outside (0, 1].
std::vector<std::size_t> sample_indices(std::size_t n, double fraction, std::uint64_t seed);

// Sampled elements, kept in input order. Throws EmptyCategory for empty args.
std::vector<ParseString> sample_category(std::span<const ParseString> args, double fraction,
                                         std::uint64_t seed);

// Builds the 14 prototypes from the tactic-labelled arguments of a corpus
// (non-arguments are ignored). Throws MissingTactic naming the first tactic
// without arguments.
PrototypeSet build_prototypes(std::span<const LabeledArgument> corpus, const PrototypeConfig& config);

}  // namespace parsetactic
