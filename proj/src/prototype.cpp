#include "parsetactic/prototype.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "parsetactic/editdist.hpp"
#include "parsetactic/errors.hpp"
#include "parsetactic/parallel.hpp"
#include "parsetactic/random.hpp"

namespace parsetactic {

std::string_view method_name(PrototypeMethod m) noexcept {
  return m == PrototypeMethod::Median ? "median" : "synthetic";
}

std::vector<std::pair<Tactic, Tactic>> PrototypeSet::duplicate_prototypes() const {
  std::vector<std::pair<Tactic, Tactic>> dups;
  for (std::size_t i = 0; i < kTacticCount; ++i) {
    for (std::size_t j = i + 1; j < kTacticCount; ++j) {
      if (prototypes[i] == prototypes[j]) dups.emplace_back(kAllTactics[i], kAllTactics[j]);
    }
  }
  return dups;
}

std::size_t set_median_index(std::span<const ParseString> strings) {
  if (strings.empty()) throw EmptyCategory("set median of an empty list");
  const std::size_t n = strings.size();
  std::vector<std::size_t> sums(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const CompiledPattern pattern(strings[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::size_t d = pattern.distance(strings[j]);
      sums[i] += d;
      sums[j] += d;
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (sums[i] != sums[best]) {
      if (sums[i] < sums[best]) best = i;
      continue;
    }
    if (strings[i].size() != strings[best].size()) {
      if (strings[i].size() < strings[best].size()) best = i;
      continue;
    }
    if (render_tokens(strings[i].tokens()) < render_tokens(strings[best].tokens())) best = i;
  }
  return best;
}

ParseString set_median(std::span<const ParseString> strings) { return strings[set_median_index(strings)]; }

std::vector<ParseString> segment(const ParseString& ps, std::size_t k) {
  if (k == 0) throw InvalidSegmentCount("segment count must be positive");
  const std::size_t n = ps.size();
  const std::size_t base = n / k;
  const std::size_t extra = n % k;
  std::vector<ParseString> parts;
  parts.reserve(k);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t len = base + (i < extra ? 1 : 0);
    parts.emplace_back(std::vector<Token>(ps.begin() + static_cast<std::ptrdiff_t>(pos),
                                          ps.begin() + static_cast<std::ptrdiff_t>(pos + len)));
    pos += len;
  }
  return parts;
}

ParseString synthesize_prototype(std::span<const ParseString> strings, std::size_t k) {
  if (strings.empty()) throw EmptyCategory("synthetic prototype of an empty list");
  if (k == 0) throw InvalidSegmentCount("segment count must be positive");

  // columns[i][s] is the i-th segment of string s.
  std::vector<std::vector<ParseString>> columns(k);
  for (auto& column : columns) column.reserve(strings.size());
  for (const ParseString& s : strings) {
    auto parts = segment(s, k);
    for (std::size_t i = 0; i < k; ++i) columns[i].push_back(std::move(parts[i]));
  }

  ParseString out;
  for (const auto& column : columns) out.append(set_median(column).tokens());
  return out;
}

std::size_t sample_size(std::size_t n, double fraction) {
  const auto rounded = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 0.5));
  return std::clamp<std::size_t>(rounded, 1, n == 0 ? 1 : n);
}

std::vector<std::size_t> sample_indices(std::size_t n, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw InvalidFraction("sample fraction must lie in (0, 1], got " + std::to_string(fraction));
  }
  if (fraction == 1.0) return choose_indices(n, n, seed);
  return choose_indices(n, sample_size(n, fraction), seed);
}

std::vector<ParseString> sample_category(std::span<const ParseString> args, double fraction,
                                         std::uint64_t seed) {
  if (args.empty()) throw EmptyCategory("cannot sample from an empty category");
  std::vector<ParseString> out;
  for (std::size_t i : sample_indices(args.size(), fraction, seed)) out.push_back(args[i]);
  return out;
}

PrototypeSet build_prototypes(std::span<const LabeledArgument> corpus, const PrototypeConfig& config) {
  if (config.method == PrototypeMethod::Synthetic && config.segment_count == 0) {
    throw InvalidSegmentCount("segment count must be positive");
  }
  if (!(config.set_fraction > 0.0 && config.set_fraction <= 1.0)) {
    throw InvalidFraction("set fraction must lie in (0, 1], got " + std::to_string(config.set_fraction));
  }

  std::array<std::vector<ParseString>, kTacticCount> by_tactic;
  for (const LabeledArgument& arg : corpus) {
    if (arg.gold) by_tactic[index_of(*arg.gold)].push_back(arg.parse);
  }
  for (Tactic t : kAllTactics) {
    if (by_tactic[index_of(t)].empty()) throw MissingTactic(std::string(tactic_name(t)));
  }

  PrototypeSet set;
  set.method = config.method;
  set.set_fraction = config.set_fraction;
  set.segment_count = config.segment_count;
  set.seed = config.seed;

  parallel_for(kTacticCount, config.threads, [&](std::size_t i) {
    const auto sample = sample_category(by_tactic[i], config.set_fraction, derive_seed(config.seed, i));
    set.source_counts[i] = sample.size();
    set.prototypes[i] = config.method == PrototypeMethod::Median
                            ? set_median(sample)
                            : synthesize_prototype(sample, config.segment_count);
  });
  return set;
}

}  // namespace parsetactic
