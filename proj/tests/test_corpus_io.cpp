#include <random>
#include <sstream>

#include "doctest.h"
#include "parsetactic/corpus_io.hpp"
#include "parsetactic/errors.hpp"
#include "test_support.hpp"

using namespace parsetactic;
using namespace parsetactic::testing;

TEST_CASE("tactic names and aliases") {
  const TacticNameTable names;
  CHECK(normalize_tactic_name("Deontic/Moral Appeal") == "deontic_moral_appeal");
  CHECK(normalize_tactic_name("  Self-Feeling ") == "self_feeling");
  CHECK(names.lookup("Deontic/Moral Appeal") == std::optional<Label>(Tactic::DeonticMoralAppeal));
  CHECK(names.lookup("good_bad_traits") == std::optional<Label>(Tactic::GoodBadTraits));
  CHECK(names.lookup("VIP") == std::optional<Label>(Tactic::VIP));
  CHECK(names.lookup("Outcomes") == std::optional<Label>(Tactic::Outcome));
  CHECK(names.lookup("non-argument") == std::optional<Label>(Label{}));
  CHECK_FALSE(names.lookup("bribery").has_value());
  for (Tactic t : kAllTactics) CHECK(names.lookup(tactic_name(t)) == std::optional<Label>(t));

  TacticNameTable custom;
  custom.add_alias("urgency", Tactic::Scarcity);
  CHECK(custom.lookup("Urgency") == std::optional<Label>(Tactic::Scarcity));
  CHECK_THROWS_AS(resolve_label("bribery", names), FormatError);
}

TEST_CASE("corpus records") {
  const CorpusRecord r = parse_corpus_record(
      R"j({"id":"a1","text":"I'm angry","trees":["(S (NP (PRP I)) (VP (VBP 'm)))"],"gold":"Reasoning","source":"cmv"})j");
  CHECK(r.id == "a1");
  CHECK(r.text == std::optional<std::string>("I'm angry"));
  CHECK(r.trees.size() == 1);
  CHECK(r.gold == std::optional<std::string>("Reasoning"));
  CHECK(r.source == std::optional<std::string>("cmv"));
  CHECK(parse_corpus_record(format_corpus_record(r)) == r);

  const CorpusRecord minimal = parse_corpus_record(R"j({"id":7,"trees":["(NN x)"]})j");
  CHECK(minimal.id == "7");
  CHECK_FALSE(minimal.gold.has_value());

  CHECK_THROWS_AS(parse_corpus_record("{not json"), FormatError);
  CHECK_THROWS_AS(parse_corpus_record(R"j({"trees":["(NN x)"]})j"), FormatError);
  CHECK_THROWS_AS(parse_corpus_record(R"j({"id":"x","trees":[]})j"), FormatError);
  CHECK_THROWS_AS(parse_corpus_record(R"j({"id":"x","trees":[3]})j"), FormatError);
  CHECK_THROWS_AS(parse_corpus_record(R"j([1,2])j"), FormatError);
}

TEST_CASE("read_corpus reports line numbers and duplicates") {
  std::istringstream ok("{\"id\":\"a\",\"trees\":[\"(NN x)\"]}\n\n{\"id\":\"b\",\"trees\":[\"(NN y)\"]}\n");
  CHECK(read_corpus(ok).size() == 2);

  std::istringstream bad("{\"id\":\"a\",\"trees\":[\"(NN x)\"]}\n{\"id\":\"b\"}\n");
  try {
    read_corpus(bad);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).rfind("line 2:", 0) == 0);
  }

  std::istringstream dup("{\"id\":\"a\",\"trees\":[\"(NN x)\"]}\n{\"id\":\"a\",\"trees\":[\"(NN y)\"]}\n");
  CHECK_THROWS_AS(read_corpus(dup), FormatError);
}

TEST_CASE("labeled arguments") {
  const std::vector<CorpusRecord> records = {
      {"s", std::nullopt, {std::string(kScarcityTree)}, "Scarcity", std::nullopt},
      {"n", std::nullopt, {"(NN x)"}, "non-argument", std::nullopt},
      {"u", std::nullopt, {"(NN x)"}, std::nullopt, std::nullopt},
  };
  const auto args = to_labeled_arguments(records, TacticNameTable{});
  REQUIRE(args.size() == 2);
  CHECK(args[0].gold == Tactic::Scarcity);
  CHECK(render(args[0].parse) == kScarcityParseString);
  CHECK_FALSE(args[1].gold.has_value());

  const std::vector<CorpusRecord> broken = {{"b", std::nullopt, {"(NP (NN x)"}, "reasoning", std::nullopt}};
  CHECK_THROWS_AS(to_labeled_arguments(broken, TacticNameTable{}), MalformedTree);
}

TEST_CASE("property: corpus and prototype files round-trip") {
  std::mt19937_64 rng(9);
  std::vector<CorpusRecord> records;
  for (int i = 0; i < 30; ++i) {
    CorpusRecord r;
    r.id = "r" + std::to_string(i);
    if (i % 2) r.text = "text \"quoted\" é " + std::to_string(i);
    r.trees.push_back(render(random_parse_string(rng, 40)));
    if (i % 3) r.gold = std::string(tactic_name(kAllTactics[static_cast<std::size_t>(i) % kTacticCount]));
    if (i % 5) r.source = "src";
    records.push_back(std::move(r));
  }
  std::stringstream corpus_file;
  write_corpus(corpus_file, records);
  CHECK(read_corpus(corpus_file) == records);

  for (PrototypeMethod method : {PrototypeMethod::Median, PrototypeMethod::Synthetic}) {
    PrototypeSet set;
    set.method = method;
    set.seed = 0xFFFFFFFFFFFFFFFFULL;
    set.set_fraction = 0.3;
    for (std::size_t i = 0; i < kTacticCount; ++i) {
      // Synthetic prototypes can be unbalanced; they must survive verbatim.
      set.prototypes[i] = random_tokens(rng, 30, 6);
      set.source_counts[i] = i * 3 + 1;
    }
    std::stringstream file;
    write_prototypes(file, set);
    const PrototypeSet back = read_prototypes(file, TacticNameTable{});
    CHECK(back == set);
  }
}

TEST_CASE("externally supplied prototype file") {
  std::string text = R"j({"method": "median", "prototypes": {)j";
  for (Tactic t : kAllTactics) {
    text += "\"" + std::string(tactic_display_name(t)) + "\": \"" +
            (t == Tactic::Reasoning ? std::string(kReasoningParseString) : "(S (NP) (VP))") + "\",";
  }
  text.back() = '}';
  text += "}";
  std::istringstream in(text);
  const PrototypeSet set = read_prototypes(in, TacticNameTable{});
  CHECK(set.method == PrototypeMethod::Median);
  CHECK(set.set_fraction == kDefaultSetFraction);
  CHECK(render(set[Tactic::Reasoning]) == kReasoningParseString);

  std::istringstream missing(R"j({"method":"median","prototypes":{"reasoning":"(S)"}})j");
  CHECK_THROWS_AS(read_prototypes(missing, TacticNameTable{}), FormatError);
  std::istringstream garbage("nope");
  CHECK_THROWS_AS(read_prototypes(garbage, TacticNameTable{}), FormatError);
  std::istringstream bad_method(R"j({"method":"mode","prototypes":{}})j");
  CHECK_THROWS_AS(read_prototypes(bad_method, TacticNameTable{}), FormatError);
}

TEST_CASE("results lines use fixed rounding") {
  Classification c;
  c.decision = Tactic::Reasoning;
  c.distances.fill(1.0 / 3.0);
  c.distances[index_of(Tactic::Reasoning)] = 0.0;
  c.best_similarity = 1.0;
  const std::string line = format_classification("x", c);
  CHECK(line.find("\"decision\":\"reasoning\"") != std::string::npos);
  CHECK(line.find("\"outcome\":0.333333") != std::string::npos);
  CHECK(line.find("\"best_similarity\":1.0") != std::string::npos);

  c.decision = std::nullopt;
  CHECK(format_classification("x", c).find("\"decision\":\"non-argument\"") != std::string::npos);
  CHECK(format_record_error("y", 4, "bad").find("\"error\":\"bad\"") != std::string::npos);
}

TEST_CASE("report file round-trip") {
  std::vector<Classification> results(6);
  std::vector<Label> golds;
  for (std::size_t i = 0; i < results.size(); ++i) {
    results[i].decision = i == 5 ? Label{} : Label{kAllTactics[i % 3]};
    golds.push_back(i == 4 ? Label{} : Label{kAllTactics[i % 2]});
  }
  EvalOptions options;
  options.threshold = 0.1;
  const MetricsReport report = summarize(results, golds, options);

  std::stringstream first;
  write_report(first, report);
  std::istringstream in(first.str());
  const MetricsReport back = read_report(in);
  CHECK(back.tally == report.tally);
  CHECK(back.classes.size() == report.classes.size());
  CHECK(*back.macro.f1 == doctest::Approx(*report.macro.f1).epsilon(1e-6));

  std::stringstream second;
  write_report(second, back);
  CHECK(second.str() == first.str());
}
