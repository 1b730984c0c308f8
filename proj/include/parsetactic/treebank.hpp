#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace parsetactic {

// A constituency tree node as read from bracketed text. A node carries either
// children or a terminal word; after strip_terminals a leaf carries neither.
struct RawTree {
  std::string label;
  std::vector<RawTree> children;
  std::optional<std::string> word;

  bool is_leaf() const noexcept { return children.empty(); }

  friend bool operator==(const RawTree&, const RawTree&) = default;
};

// One structural symbol of a parse string: Open(label) or Close.
//
// Labels are interned in a process-wide table, so a token is a single 32-bit
// code and token equality is integer equality. Code 0 is Close.
class Token {
 public:
  static Token open(std::string_view label);
  static constexpr Token close() noexcept { return Token{0}; }

  bool is_open() const noexcept { return code_ != 0; }
  bool is_close() const noexcept { return code_ == 0; }

  // Label of an Open token; empty for Close.
  std::string_view label() const;

  std::uint32_t code() const noexcept { return code_; }

  friend bool operator==(Token, Token) = default;

 private:
  explicit constexpr Token(std::uint32_t code) noexcept : code_(code) {}

  std::uint32_t code_;
};

// Number of distinct codes handed out so far (Close included); every code is
// strictly below this value.
std::uint32_t token_code_bound();

// The lexicon-free linearization of one or more stripped trees.
//
// A ParseString produced by linearize is balanced, but the type itself holds
// any token sequence: synthetic prototypes stitched from segments of
// different strings generally are not.
class ParseString {
 public:
  ParseString() = default;
  explicit ParseString(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}
  ParseString(std::initializer_list<Token> tokens) : tokens_(tokens) {}

  std::size_t size() const noexcept { return tokens_.size(); }
  bool empty() const noexcept { return tokens_.empty(); }
  Token operator[](std::size_t i) const noexcept { return tokens_[i]; }

  auto begin() const noexcept { return tokens_.begin(); }
  auto end() const noexcept { return tokens_.end(); }

  std::span<const Token> tokens() const noexcept { return tokens_; }

  void push_back(Token t) { tokens_.push_back(t); }
  void append(std::span<const Token> more) { tokens_.insert(tokens_.end(), more.begin(), more.end()); }

  // Every Open has a matching Close and no prefix closes more than it opens.
  bool is_balanced() const noexcept;

  friend bool operator==(const ParseString&, const ParseString&) = default;

 private:
  std::vector<Token> tokens_;
};

// Reads a single bracketed tree such as "(NP (PRP$ their) (NN relationship))".
// Throws EmptyInput for blank text and MalformedTree for anything that is not
// exactly one well-formed tree.
RawTree parse_bracketed(std::string_view text);

// Removes every terminal word; POS nodes stay as childless leaves.
RawTree strip_terminals(RawTree tree);

// Merges each maximal chain of nodes that have exactly one non-leaf child into
// a single node labelled "TOP+...+BOTTOM". Leaves never join a chain.
RawTree collapse_unary_chains(RawTree tree);

// Pre-order Open/Close emission. Throws NotStripped if any node has a word.
ParseString linearize(const RawTree& tree);

// Concatenation of the linearizations of several trees, in order. An empty
// list yields the empty parse string.
ParseString linearize(std::span<const RawTree> trees);

// Canonical text: "(NP (PRP$) (NN))". Throws Unbalanced.
std::string render(const ParseString& ps);

// Same textual convention without the balance check; used for synthetic
// prototypes and segments.
std::string render_tokens(std::span<const Token> tokens);

// Inverse of render_tokens: reads "(LABEL" and ")" symbols, ignoring
// whitespace. Accepts unbalanced sequences; throws MalformedTree if the text
// contains a bare word or an empty label.
ParseString parse_tokens(std::string_view text);

// Full pipeline for one argument: parse each bracketed tree, strip words,
// collapse unary chains and concatenate the linearizations.
ParseString parse_string_from_trees(std::span<const std::string> bracketed_trees);

}  // namespace parsetactic
