#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "parsetactic/treebank.hpp"

namespace parsetactic {

struct EditCosts {
  double insert = 1.0;
  double remove = 1.0;
  double substitute = 1.0;
};

// Minimum-cost edit script value under arbitrary non-negative costs.
// Row-vector dynamic programming; O(|a|·|b|) time, O(min(|a|,|b|)) memory.
double edit_distance(const ParseString& a, const ParseString& b, const EditCosts& costs);

// Unit-cost (Levenshtein) distance over tokens. Uses the bit-parallel kernel.
std::size_t edit_distance(const ParseString& a, const ParseString& b);

// edit_distance / max(|a|, |b|); 0 when both are empty.
double normalized_distance(const ParseString& a, const ParseString& b);

// 1 - normalized_distance.
double similarity(const ParseString& a, const ParseString& b);

// A parse string preprocessed for repeated unit-cost distance queries.
//
// Bit-parallel global edit distance in the style of Myers (1999) with
// Hyyrö's multi-word blocks: one 64-bit word per 64 pattern tokens, so a query
// against a text of n tokens costs O(n·⌈m/64⌉) word operations.
class CompiledPattern {
 public:
  explicit CompiledPattern(const ParseString& pattern);

  std::size_t distance(const ParseString& text) const;

  double normalized_distance(const ParseString& text) const;

  std::size_t size() const noexcept { return length_; }

 private:
  const std::uint64_t* masks_for(Token t) const noexcept;

  std::size_t length_ = 0;
  std::size_t blocks_ = 0;
  // Dense table: code -> blocks_ words; codes past the table never match.
  std::vector<std::uint64_t> peq_;
  std::size_t code_limit_ = 0;
};

}  // namespace parsetactic
