#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "parsetactic/classifier.hpp"
#include "parsetactic/corpus.hpp"
#include "parsetactic/eval.hpp"
#include "parsetactic/prototype.hpp"
#include "parsetactic/tactic.hpp"

namespace parsetactic {

// One line of a corpus file:
//   {"id": ..., "text": ..., "trees": ["(S ...)", ...], "gold": ..., "source": ...}
// text, gold and source are optional.
struct CorpusRecord {
  std::string id;
  std::optional<std::string> text;
  std::vector<std::string> trees;
  std::optional<std::string> gold;
  std::optional<std::string> source;

  friend bool operator==(const CorpusRecord&, const CorpusRecord&) = default;
};

// Values written to results and report files are rounded to this many
// decimals so reruns diff cleanly.
inline constexpr int kOutputDecimals = 6;

double round_output(double value);

// Throws FormatError on invalid JSON, a missing id or an empty tree list.
CorpusRecord parse_corpus_record(std::string_view line);

std::string format_corpus_record(const CorpusRecord& record);

// Reads a JSON-lines corpus; blank lines are skipped. Errors carry the
// 1-based line number. Duplicate ids are rejected.
std::vector<CorpusRecord> read_corpus(std::istream& in);

void write_corpus(std::ostream& out, std::span<const CorpusRecord> records);

// Throws FormatError for a name that is neither a tactic nor "non-argument".
Label resolve_label(std::string_view name, const TacticNameTable& names);

// Parse string of a record's trees (parsed, stripped, collapsed, concatenated).
// Tree errors are rethrown as MalformedTree prefixed with the record id.
ParseString record_parse_string(const CorpusRecord& record);

// Records that carry a gold label, converted for prototype building and
// evaluation; records without gold are skipped.
std::vector<LabeledArgument> to_labeled_arguments(std::span<const CorpusRecord> records,
                                                  const TacticNameTable& names);

void write_prototypes(std::ostream& out, const PrototypeSet& set);

// Accepts files written by write_prototypes as well as hand-assembled ones:
// only "method" and the 14 entries of "prototypes" are required. Prototype
// strings are read verbatim as token sequences and need not be balanced.
PrototypeSet read_prototypes(std::istream& in, const TacticNameTable& names);

// One results-file line: id, decision, 14 distances and best similarity.
std::string format_classification(std::string_view id, const Classification& c);

// Results-file line for a record that could not be classified.
std::string format_record_error(std::string_view id, std::size_t line, std::string_view message);

void write_report(std::ostream& out, const MetricsReport& report);

MetricsReport read_report(std::istream& in);

}  // namespace parsetactic
