#include "parsetactic/editdist.hpp"

#include <algorithm>
#include <array>
#include <bit>

namespace parsetactic {

double edit_distance(const ParseString& a, const ParseString& b, const EditCosts& costs) {
  // Keep the row over the shorter sequence. Swapping the roles of a and b
  // swaps insertion with deletion.
  const bool swap = b.size() > a.size();
  const ParseString& outer = swap ? b : a;
  const ParseString& inner = swap ? a : b;
  const double ins = swap ? costs.remove : costs.insert;
  const double del = swap ? costs.insert : costs.remove;

  constexpr std::size_t kInlineRow = 256;
  std::array<double, kInlineRow> inline_row;
  std::vector<double> heap_row;
  double* row = inline_row.data();
  if (inner.size() + 1 > kInlineRow) {
    heap_row.resize(inner.size() + 1);
    row = heap_row.data();
  }
  for (std::size_t j = 0; j <= inner.size(); ++j) row[j] = static_cast<double>(j) * ins;

  const Token* in = inner.tokens().data();
  const std::size_t width = inner.size();
  for (std::size_t i = 1; i <= outer.size(); ++i) {
    const Token o = outer[i - 1];
    double diag = row[0];
    double left = static_cast<double>(i) * del;
    row[0] = left;
    for (std::size_t j = 1; j <= width; ++j) {
      const double up = row[j];
      const double sub = diag + (o == in[j - 1] ? 0.0 : costs.substitute);
      left = std::min(sub, std::min(up + del, left + ins));
      row[j] = left;
      diag = up;
    }
  }
  return row[inner.size()];
}

std::size_t edit_distance(const ParseString& a, const ParseString& b) {
  const bool a_shorter = a.size() <= b.size();
  return CompiledPattern(a_shorter ? a : b).distance(a_shorter ? b : a);
}

double normalized_distance(const ParseString& a, const ParseString& b) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 0.0;
  return static_cast<double>(edit_distance(a, b)) / static_cast<double>(longest);
}

double similarity(const ParseString& a, const ParseString& b) { return 1.0 - normalized_distance(a, b); }

CompiledPattern::CompiledPattern(const ParseString& pattern)
    : length_(pattern.size()), blocks_((pattern.size() + 63) / 64) {
  std::uint32_t max_code = 0;
  for (Token t : pattern) max_code = std::max(max_code, t.code());
  code_limit_ = pattern.empty() ? 0 : static_cast<std::size_t>(max_code) + 1;
  peq_.assign(code_limit_ * blocks_, 0);
  for (std::size_t i = 0; i < length_; ++i) {
    peq_[pattern[i].code() * blocks_ + i / 64] |= std::uint64_t{1} << (i % 64);
  }
}

const std::uint64_t* CompiledPattern::masks_for(Token t) const noexcept {
  return t.code() < code_limit_ ? &peq_[t.code() * blocks_] : nullptr;
}

std::size_t CompiledPattern::distance(const ParseString& text) const {
  if (length_ == 0) return text.size();
  if (text.empty()) return length_;

  // Vertical delta vectors per block: D[i][0] = i, so every delta starts +1.
  // Patterns up to 1024 tokens keep their state on the stack.
  constexpr std::size_t kInlineBlocks = 16;
  std::array<std::uint64_t, 2 * kInlineBlocks> inline_state;
  std::vector<std::uint64_t> heap_state;
  std::uint64_t* pv = inline_state.data();
  if (blocks_ > kInlineBlocks) {
    heap_state.resize(2 * blocks_);
    pv = heap_state.data();
  }
  std::uint64_t* mv = pv + blocks_;
  std::fill(pv, pv + blocks_, ~std::uint64_t{0});
  std::fill(mv, mv + blocks_, std::uint64_t{0});
  const std::size_t last = blocks_ - 1;
  const unsigned last_bit = static_cast<unsigned>((length_ - 1) % 64);
  std::size_t score = length_;

  for (Token t : text) {
    const std::uint64_t* eq_row = masks_for(t);
    // Horizontal delta entering the top row: D[0][j] - D[0][j-1] = +1.
    int hin = 1;
    for (std::size_t b = 0; b < blocks_; ++b) {
      std::uint64_t eq = eq_row ? eq_row[b] : 0;
      const std::uint64_t p = pv[b];
      const std::uint64_t m = mv[b];
      const std::uint64_t hin_neg = hin < 0 ? 1 : 0;
      const std::uint64_t xv = eq | m;
      eq |= hin_neg;
      const std::uint64_t xh = (((eq & p) + p) ^ p) | eq;
      std::uint64_t ph = m | ~(xh | p);
      std::uint64_t mh = p & xh;

      const unsigned out_bit = b == last ? last_bit : 63;
      const int hout = static_cast<int>((ph >> out_bit) & 1) - static_cast<int>((mh >> out_bit) & 1);

      ph <<= 1;
      mh <<= 1;
      mh |= hin_neg;
      ph |= hin > 0 ? 1 : 0;
      pv[b] = mh | ~(xv | ph);
      mv[b] = ph & xv;
      hin = hout;
    }
    score = static_cast<std::size_t>(static_cast<long long>(score) + hin);
  }
  return score;
}

double CompiledPattern::normalized_distance(const ParseString& text) const {
  const std::size_t longest = std::max(length_, text.size());
  if (longest == 0) return 0.0;
  return static_cast<double>(distance(text)) / static_cast<double>(longest);
}

}  // namespace parsetactic
