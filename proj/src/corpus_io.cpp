#include "parsetactic/corpus_io.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <string>

#include "json.hpp"

#include "parsetactic/errors.hpp"

namespace parsetactic {

using json = nlohmann::ordered_json;

namespace {

std::string at_line(std::size_t line, const std::string& what) {
  return "line " + std::to_string(line) + ": " + what;
}

bool is_blank(std::string_view s) {
  return s.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

std::optional<std::string> optional_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw FormatError(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

json metric_value(const std::optional<double>& v) {
  if (!v) return nullptr;
  return round_output(*v);
}

std::optional<double> metric_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

json prf_json(const PrfMetrics& m) {
  json j;
  j["precision"] = metric_value(m.precision);
  j["recall"] = metric_value(m.recall);
  j["f1"] = metric_value(m.f1);
  return j;
}

PrfMetrics prf_from(const json& j) {
  return {metric_from(j.at("precision")), metric_from(j.at("recall")), metric_from(j.at("f1"))};
}

json tactic_map_json(const std::map<Tactic, double>& m) {
  json j = json::object();
  for (const auto& [t, v] : m) j[std::string(tactic_name(t))] = round_output(v);
  return j;
}

std::map<Tactic, double> tactic_map_from(const json& j, const TacticNameTable& names) {
  std::map<Tactic, double> m;
  for (const auto& [key, value] : j.items()) {
    const Label label = resolve_label(key, names);
    if (!label) throw FormatError("non-argument cannot appear in a per-tactic map");
    m[*label] = value.get<double>();
  }
  return m;
}

}  // namespace

double round_output(double value) {
  const double scale = std::pow(10.0, kOutputDecimals);
  const double r = std::round(value * scale) / scale;
  return r == 0.0 ? 0.0 : r;  // no "-0.0"
}

CorpusRecord parse_corpus_record(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw FormatError("record must be a JSON object");

  CorpusRecord rec;
  auto id = j.find("id");
  if (id == j.end()) throw FormatError("record has no 'id'");
  if (id->is_string()) {
    rec.id = id->get<std::string>();
  } else if (id->is_number_integer()) {
    rec.id = id->dump();
  } else {
    throw FormatError("'id' must be a string or an integer");
  }

  auto trees = j.find("trees");
  if (trees == j.end() || !trees->is_array() || trees->empty()) {
    throw FormatError("record '" + rec.id + "' needs a non-empty 'trees' array");
  }
  for (const json& t : *trees) {
    if (!t.is_string()) throw FormatError("record '" + rec.id + "': every tree must be a string");
    rec.trees.push_back(t.get<std::string>());
  }
  rec.text = optional_string(j, "text");
  rec.gold = optional_string(j, "gold");
  rec.source = optional_string(j, "source");
  return rec;
}

std::string format_corpus_record(const CorpusRecord& record) {
  json j;
  j["id"] = record.id;
  if (record.text) j["text"] = *record.text;
  j["trees"] = record.trees;
  if (record.gold) j["gold"] = *record.gold;
  if (record.source) j["source"] = *record.source;
  return j.dump();
}

std::vector<CorpusRecord> read_corpus(std::istream& in) {
  std::vector<CorpusRecord> records;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    try {
      records.push_back(parse_corpus_record(line));
    } catch (const FormatError& e) {
      throw FormatError(at_line(line_no, e.what()));
    }
    if (!ids.insert(records.back().id).second) {
      throw FormatError(at_line(line_no, "duplicate id '" + records.back().id + "'"));
    }
  }
  return records;
}

void write_corpus(std::ostream& out, std::span<const CorpusRecord> records) {
  for (const CorpusRecord& r : records) out << format_corpus_record(r) << '\n';
}

Label resolve_label(std::string_view name, const TacticNameTable& names) {
  auto label = names.lookup(name);
  if (!label) throw FormatError("unknown tactic name '" + std::string(name) + "'");
  return *label;
}

ParseString record_parse_string(const CorpusRecord& record) {
  try {
    return parse_string_from_trees(record.trees);
  } catch (const FormatError& e) {
    throw MalformedTree("record '" + record.id + "': " + e.what());
  }
}

std::vector<LabeledArgument> to_labeled_arguments(std::span<const CorpusRecord> records,
                                                  const TacticNameTable& names) {
  std::vector<LabeledArgument> out;
  for (const CorpusRecord& r : records) {
    if (!r.gold) continue;
    Label gold;
    try {
      gold = resolve_label(*r.gold, names);
    } catch (const FormatError& e) {
      throw FormatError("record '" + r.id + "': " + e.what());
    }
    out.push_back({r.id, record_parse_string(r), gold, r.source.value_or("")});
  }
  return out;
}

void write_prototypes(std::ostream& out, const PrototypeSet& set) {
  json j;
  j["method"] = std::string(method_name(set.method));
  j["set_fraction"] = set.set_fraction;
  if (set.method == PrototypeMethod::Synthetic) j["segments"] = set.segment_count;
  j["seed"] = set.seed;
  json protos = json::object();
  json counts = json::object();
  for (Tactic t : kAllTactics) {
    protos[std::string(tactic_name(t))] = render_tokens(set[t].tokens());
    counts[std::string(tactic_name(t))] = set.source_counts[index_of(t)];
  }
  j["prototypes"] = std::move(protos);
  j["source_counts"] = std::move(counts);
  out << j.dump(2) << '\n';
}

PrototypeSet read_prototypes(std::istream& in, const TacticNameTable& names) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("prototype file is not valid JSON: ") + e.what());
  }
  try {
    PrototypeSet set;
    const std::string method = j.at("method").get<std::string>();
    if (method == "median") {
      set.method = PrototypeMethod::Median;
    } else if (method == "synthetic") {
      set.method = PrototypeMethod::Synthetic;
    } else {
      throw FormatError("unknown prototype method '" + method + "'");
    }
    set.set_fraction = j.value("set_fraction", kDefaultSetFraction);
    set.segment_count = j.value("segments", kDefaultSegmentCount);
    set.seed = j.value("seed", std::uint64_t{0});

    std::array<bool, kTacticCount> seen{};
    for (const auto& [key, value] : j.at("prototypes").items()) {
      const Label label = resolve_label(key, names);
      if (!label) throw FormatError("prototype file cannot hold a non-argument prototype");
      set[*label] = parse_tokens(value.get<std::string>());
      seen[index_of(*label)] = true;
    }
    for (Tactic t : kAllTactics) {
      if (!seen[index_of(t)]) throw FormatError("prototype file lacks tactic '" + std::string(tactic_name(t)) + "'");
    }
    if (auto counts = j.find("source_counts"); counts != j.end()) {
      for (const auto& [key, value] : counts->items()) {
        const Label label = resolve_label(key, names);
        if (label) set.source_counts[index_of(*label)] = value.get<std::size_t>();
      }
    }
    return set;
  } catch (const json::exception& e) {
    throw FormatError(std::string("prototype file: ") + e.what());
  }
}

std::string format_classification(std::string_view id, const Classification& c) {
  json j;
  j["id"] = id;
  j["decision"] = std::string(label_name(c.decision));
  json distances = json::object();
  for (Tactic t : kAllTactics) distances[std::string(tactic_name(t))] = round_output(c.distances[index_of(t)]);
  j["distances"] = std::move(distances);
  j["best_similarity"] = round_output(c.best_similarity);
  return j.dump();
}

std::string format_record_error(std::string_view id, std::size_t line, std::string_view message) {
  json j;
  j["id"] = id;
  j["line"] = line;
  j["error"] = message;
  return j.dump();
}

void write_report(std::ostream& out, const MetricsReport& report) {
  json j;
  j["threshold"] = report.threshold ? json(round_output(*report.threshold)) : json(nullptr);
  j["binary"] = report.binary;
  j["total"] = report.tally.total;
  j["rejected"] = report.tally.rejected();
  json classes = json::array();
  for (const ClassMetrics& c : report.classes) {
    json row;
    row["name"] = c.name;
    row["retrieved"] = c.retrieved;
    row["relevant"] = c.relevant;
    row["hits"] = c.hits;
    row.update(prf_json(c.metrics));
    classes.push_back(std::move(row));
  }
  j["classes"] = std::move(classes);
  j["macro"] = prf_json(report.macro);
  j["per_category_accuracy"] = tactic_map_json(report.per_category_accuracy);
  j["distribution"] = tactic_map_json(report.distribution);

  json labels = json::array();
  for (Tactic t : kAllTactics) labels.push_back(std::string(tactic_name(t)));
  labels.push_back(std::string(kNonArgumentName));
  j["confusion"]["labels"] = std::move(labels);
  j["confusion"]["matrix"] = report.tally.matrix;
  out << j.dump(2) << '\n';
}

MetricsReport read_report(std::istream& in) {
  const TacticNameTable names;
  try {
    const json j = json::parse(in);
    MetricsReport report;
    if (!j.at("threshold").is_null()) report.threshold = j.at("threshold").get<double>();
    report.binary = j.at("binary").get<bool>();
    for (const json& row : j.at("classes")) {
      report.classes.push_back({row.at("name").get<std::string>(), row.at("retrieved").get<std::size_t>(),
                                row.at("relevant").get<std::size_t>(), row.at("hits").get<std::size_t>(),
                                prf_from(row)});
    }
    report.macro = prf_from(j.at("macro"));
    report.per_category_accuracy = tactic_map_from(j.at("per_category_accuracy"), names);
    report.distribution = tactic_map_from(j.at("distribution"), names);

    const auto matrix = j.at("confusion").at("matrix").get<std::vector<std::vector<std::size_t>>>();
    if (matrix.size() != kBucketCount) throw FormatError("confusion matrix must be 15 x 15");
    ConfusionTally& tally = report.tally;
    for (std::size_t g = 0; g < kBucketCount; ++g) {
      if (matrix[g].size() != kBucketCount) throw FormatError("confusion matrix must be 15 x 15");
      for (std::size_t d = 0; d < kBucketCount; ++d) {
        const std::size_t n = matrix[g][d];
        tally.matrix[g][d] = n;
        tally.relevant[g] += n;
        tally.retrieved[d] += n;
        if (g == d) tally.hits[g] += n;
        tally.total += n;
      }
    }
    return report;
  } catch (const json::exception& e) {
    throw FormatError(std::string("report file: ") + e.what());
  }
}

}  // namespace parsetactic
