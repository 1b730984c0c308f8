#include "parsetactic/treebank.hpp"

#include <cctype>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "parsetactic/errors.hpp"

namespace parsetactic {

namespace {

// Process-wide label interner. Codes start at 1; 0 is reserved for Close.
class LabelTable {
 public:
  static LabelTable& instance() {
    static LabelTable table;
    return table;
  }

  std::uint32_t intern(std::string_view label) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = codes_.find(label); it != codes_.end()) return it->second;
    }
    std::unique_lock lock(mutex_);
    if (auto it = codes_.find(label); it != codes_.end()) return it->second;
    const std::string& stored = labels_.emplace_back(label);
    const auto code = static_cast<std::uint32_t>(labels_.size());
    codes_.emplace(std::string_view(stored), code);
    return code;
  }

  std::string_view label(std::uint32_t code) const {
    std::shared_lock lock(mutex_);
    return labels_[code - 1];
  }

  std::uint32_t bound() const {
    std::shared_lock lock(mutex_);
    return static_cast<std::uint32_t>(labels_.size()) + 1;
  }

 private:
  mutable std::shared_mutex mutex_;
  std::deque<std::string> labels_;  // stable addresses
  std::unordered_map<std::string_view, std::uint32_t> codes_;
};

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_symbol_char(char c) { return c != '(' && c != ')' && !is_space(c); }

class BracketReader {
 public:
  explicit BracketReader(std::string_view text) : text_(text) {}

  RawTree read_tree() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (text_[pos_] != '(') fail("expected '('");
    ++pos_;
    RawTree node;
    node.label = read_symbol();
    if (node.label.empty()) fail("empty label");
    for (;;) {
      skip_space();
      if (pos_ >= text_.size()) fail("unbalanced parentheses: missing ')'");
      const char c = text_[pos_];
      if (c == ')') {
        ++pos_;
        return node;
      }
      if (node.word) fail("terminal word must be the only child of '" + node.label + "'");
      if (c == '(') {
        node.children.push_back(read_tree());
      } else {
        if (!node.children.empty()) fail("word mixed with subtrees under '" + node.label + "'");
        node.word = read_symbol();
      }
    }
  }

  void expect_end() {
    skip_space();
    if (pos_ != text_.size()) fail("trailing text after the root constituent");
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
  }

  std::string read_symbol() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_symbol_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw MalformedTree(what + " at offset " + std::to_string(pos_));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void linearize_into(const RawTree& node, std::vector<Token>& out) {
  if (node.word) throw NotStripped("node '" + node.label + "' still carries word '" + *node.word + "'");
  out.push_back(Token::open(node.label));
  for (const RawTree& child : node.children) linearize_into(child, out);
  out.push_back(Token::close());
}

std::size_t count_nodes(const RawTree& node) {
  std::size_t n = 1;
  for (const RawTree& child : node.children) n += count_nodes(child);
  return n;
}

}  // namespace

Token Token::open(std::string_view label) { return Token{LabelTable::instance().intern(label)}; }

std::string_view Token::label() const {
  if (code_ == 0) return {};
  return LabelTable::instance().label(code_);
}

std::uint32_t token_code_bound() { return LabelTable::instance().bound(); }

bool ParseString::is_balanced() const noexcept {
  std::size_t depth = 0;
  for (Token t : tokens_) {
    if (t.is_open()) {
      ++depth;
    } else {
      if (depth == 0) return false;
      --depth;
    }
  }
  return depth == 0;
}

RawTree parse_bracketed(std::string_view text) {
  bool blank = true;
  for (char c : text) blank = blank && is_space(c);
  if (blank) throw EmptyInput("empty tree text");
  BracketReader reader(text);
  RawTree tree = reader.read_tree();
  reader.expect_end();
  return tree;
}

RawTree strip_terminals(RawTree tree) {
  tree.word.reset();
  for (RawTree& child : tree.children) child = strip_terminals(std::move(child));
  return tree;
}

RawTree collapse_unary_chains(RawTree tree) {
  while (tree.children.size() == 1 && !tree.children.front().is_leaf()) {
    RawTree only = std::move(tree.children.front());
    tree.label += '+';
    tree.label += only.label;
    tree.children = std::move(only.children);
  }
  for (RawTree& child : tree.children) child = collapse_unary_chains(std::move(child));
  return tree;
}

ParseString linearize(const RawTree& tree) {
  std::vector<Token> tokens;
  tokens.reserve(2 * count_nodes(tree));
  linearize_into(tree, tokens);
  return ParseString(std::move(tokens));
}

ParseString linearize(std::span<const RawTree> trees) {
  std::vector<Token> tokens;
  for (const RawTree& tree : trees) linearize_into(tree, tokens);
  return ParseString(std::move(tokens));
}

std::string render(const ParseString& ps) {
  if (!ps.is_balanced()) throw Unbalanced("parse string has unmatched brackets");
  return render_tokens(ps.tokens());
}

std::string render_tokens(std::span<const Token> tokens) {
  std::string out;
  bool first = true;
  for (Token t : tokens) {
    if (t.is_open()) {
      if (!first) out.push_back(' ');
      out.push_back('(');
      out.append(t.label());
    } else {
      out.push_back(')');
    }
    first = false;
  }
  return out;
}

ParseString parse_tokens(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char c = text[pos];
    if (is_space(c)) {
      ++pos;
    } else if (c == ')') {
      tokens.push_back(Token::close());
      ++pos;
    } else if (c == '(') {
      const std::size_t start = ++pos;
      while (pos < text.size() && is_symbol_char(text[pos])) ++pos;
      if (pos == start) throw MalformedTree("empty label at offset " + std::to_string(start));
      tokens.push_back(Token::open(text.substr(start, pos - start)));
    } else {
      throw MalformedTree("unexpected word at offset " + std::to_string(pos) +
                          "; parse strings carry no lexical material");
    }
  }
  return ParseString(std::move(tokens));
}

ParseString parse_string_from_trees(std::span<const std::string> bracketed_trees) {
  std::vector<RawTree> trees;
  trees.reserve(bracketed_trees.size());
  for (const std::string& text : bracketed_trees) {
    trees.push_back(collapse_unary_chains(strip_terminals(parse_bracketed(text))));
  }
  return linearize(trees);
}

}  // namespace parsetactic
