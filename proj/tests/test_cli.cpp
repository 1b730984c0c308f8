#include <unistd.h>

#include <random>

#include "cli_fixture.hpp"
#include "doctest.h"
#include "json.hpp"
#include "parsetactic/errors.hpp"

using namespace parsetactic;
using namespace parsetactic::testing;
using json = nlohmann::json;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("list parsing") {
  CHECK(cli::parse_real_list("0.1, 0.2") == std::vector<double>{0.1, 0.2});
  const auto range = cli::parse_real_list("0:0.05:0.5");
  REQUIRE(range.size() == 11);
  CHECK(range[3] == 0.15);
  CHECK(range.back() == 0.5);
  CHECK(cli::parse_count_list("10,100,all") == std::vector<std::size_t>{10, 100, kAllInstances});
  CHECK_THROWS_AS(cli::parse_real_list("0.1,x"), ConfigError);
  CHECK_THROWS_AS(cli::parse_real_list("0:0:1"), ConfigError);
  CHECK_THROWS_AS(cli::parse_count_list("-1"), ConfigError);
}

TEST_CASE("build") {
  TempDir dir;
  std::mt19937_64 rng(1);
  std::vector<ParseString> bases;
  write_file(dir.file("one.jsonl"), synthetic_corpus_file(rng, 1, 0.0, &bases));

  SUBCASE("one argument per tactic reproduces each argument") {
    const auto r = run_cli({"build", dir.file("one.jsonl"), "--out", dir.file("p.json")});
    REQUIRE(r.code == cli::kExitOk);
    std::ifstream in(dir.file("p.json"));
    const PrototypeSet set = read_prototypes(in, TacticNameTable{});
    for (std::size_t i = 0; i < kTacticCount; ++i) CHECK(render(set.prototypes[i]) == render(bases[i]));
    CHECK(set.method == PrototypeMethod::Synthetic);
    CHECK(set.segment_count == 9);
    CHECK(set.set_fraction == 0.3);
  }

  SUBCASE("byte-identical reruns") {
    write_file(dir.file("many.jsonl"), synthetic_corpus_file(rng, 12, 0.05));
    for (const char* method : {"median", "synthetic"}) {
      run_cli({"build", dir.file("many.jsonl"), "--method", method, "--seed", "42", "--out", dir.file("a.json")});
      run_cli({"--threads", "3", "build", dir.file("many.jsonl"), "--method", method, "--seed", "42", "--out",
               dir.file("b.json")});
      CHECK(read_file(dir.file("a.json")) == read_file(dir.file("b.json")));
      CHECK_FALSE(read_file(dir.file("a.json")).empty());
    }
  }

  SUBCASE("missing tactic") {
    std::string corpus;
    for (const auto& line : lines_of(read_file(dir.file("one.jsonl")))) {
      if (line.find("\"scarcity\"") == std::string::npos) corpus += line + "\n";
    }
    write_file(dir.file("partial.jsonl"), corpus);
    const auto r = run_cli({"build", dir.file("partial.jsonl")});
    CHECK(r.code == cli::kExitData);
    CHECK(r.err.find("scarcity") != std::string::npos);
  }

  SUBCASE("malformed record names its line") {
    std::string corpus = read_file(dir.file("one.jsonl"));
    corpus += "{\"id\": \"broken\"\n";
    write_file(dir.file("bad.jsonl"), corpus);
    const auto r = run_cli({"build", dir.file("bad.jsonl")});
    CHECK(r.code == cli::kExitFormat);
    CHECK(r.err.find("line 15") != std::string::npos);
  }

  SUBCASE("configuration errors") {
    CHECK(run_cli({"build", dir.file("one.jsonl"), "--fraction", "0"}).code == cli::kExitConfig);
    CHECK(run_cli({"build", dir.file("one.jsonl"), "--segments", "0"}).code == cli::kExitConfig);
    CHECK(run_cli({"build", dir.file("one.jsonl"), "--method", "mean"}).code == cli::kExitConfig);
    CHECK(run_cli({"frobnicate"}).code == cli::kExitConfig);
    CHECK(run_cli({"build", dir.file("absent.jsonl")}).code == cli::kExitFormat);
  }
}

TEST_CASE("classify") {
  TempDir dir;
  std::mt19937_64 rng(2);
  write_file(dir.file("one.jsonl"), synthetic_corpus_file(rng, 1, 0.0));
  REQUIRE(run_cli({"build", dir.file("one.jsonl"), "--out", dir.file("p.json")}).code == 0);
  std::ifstream in(dir.file("p.json"));
  const PrototypeSet set = read_prototypes(in, TacticNameTable{});

  SUBCASE("prototype input classifies as its own tactic") {
    write_file(dir.file("in.jsonl"), "{\"id\":\"q\",\"trees\":[\"" + render(set[Tactic::Reasoning]) + "\"]}\n");
    const auto r = run_cli({"classify", dir.file("in.jsonl"), "--prototypes", dir.file("p.json")});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["id"] == "q");
    CHECK(j["decision"] == "reasoning");
    CHECK(j["distances"]["reasoning"] == 0.0);
    CHECK(j["distances"].size() == kTacticCount);
    CHECK(j["best_similarity"] == 1.0);
  }

  SUBCASE("alien structure is rejected at 0.1") {
    std::string alien = "(QQ";
    for (int i = 0; i < 1000; ++i) alien += " (ZZ)";
    alien += ")";
    const ParseString alien_ps = parse_tokens(alien);
    for (const ParseString& p : set.prototypes) REQUIRE(similarity(alien_ps, p) < 0.1);
    write_file(dir.file("in.jsonl"), "{\"id\":\"alien\",\"trees\":[\"" + alien + "\"]}\n");
    const auto r = run_cli({"classify", dir.file("in.jsonl"), "--prototypes", dir.file("p.json"), "--threshold", "0.1"});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["decision"] == "non-argument");
    const auto no_reject = run_cli({"classify", dir.file("in.jsonl"), "--prototypes", dir.file("p.json")});
    CHECK(json::parse(no_reject.out)["decision"] != "non-argument");
    const auto flag = run_cli({"classify", dir.file("in.jsonl"), "--prototypes", dir.file("p.json"), "--reject"});
    CHECK(json::parse(flag.out)["decision"] == "non-argument");
  }

  SUBCASE("empty input") {
    write_file(dir.file("empty.jsonl"), "");
    const auto r = run_cli({"classify", dir.file("empty.jsonl"), "--prototypes", dir.file("p.json"), "--out",
                            dir.file("res.jsonl")});
    CHECK(r.code == 0);
    CHECK(read_file(dir.file("res.jsonl")).empty());
  }

  SUBCASE("bad records are reported in place and the run continues") {
    write_file(dir.file("mixed.jsonl"),
               "{\"id\":\"a\",\"trees\":[\"(S (NP (NN x)) (VP (VB y)))\"]}\n"
               "{\"id\":\"b\",\"trees\":[\"(S (NP (NN x)\"]}\n"
               "not json\n"
               "{\"id\":\"d\",\"trees\":[\"(NP (NN z))\"]}\n");
    const auto r = run_cli({"classify", dir.file("mixed.jsonl"), "--prototypes", dir.file("p.json")});
    CHECK(r.code == cli::kExitFormat);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 4);
    CHECK(json::parse(lines[0]).contains("decision"));
    CHECK(json::parse(lines[1])["id"] == "b");
    CHECK(json::parse(lines[1]).contains("error"));
    CHECK(json::parse(lines[2])["line"] == 3);
    CHECK(json::parse(lines[3])["id"] == "d");
  }

  SUBCASE("unreadable prototype file") {
    write_file(dir.file("in.jsonl"), "{\"id\":\"q\",\"trees\":[\"(NN)\"]}\n");
    write_file(dir.file("junk.json"), "{");
    CHECK(run_cli({"classify", dir.file("in.jsonl"), "--prototypes", dir.file("junk.json")}).code == cli::kExitFormat);
    CHECK(run_cli({"classify", dir.file("in.jsonl"), "--prototypes", dir.file("nope.json")}).code == cli::kExitFormat);
    CHECK(run_cli({"classify", dir.file("in.jsonl"), "--prototypes", dir.file("p.json"), "--threshold", "3"}).code ==
          cli::kExitConfig);
  }
}

TEST_CASE("evaluate") {
  TempDir dir;
  std::mt19937_64 rng(3);
  write_file(dir.file("one.jsonl"), synthetic_corpus_file(rng, 1, 0.0));
  REQUIRE(run_cli({"build", dir.file("one.jsonl"), "--out", dir.file("p.json")}).code == 0);

  const auto r = run_cli({"evaluate", dir.file("one.jsonl"), "--prototypes", dir.file("p.json"), "--out",
                          dir.file("report.json")});
  REQUIRE(r.code == 0);
  const auto lines = lines_of(r.out);
  const auto macro = std::find_if(lines.begin(), lines.end(), [](const std::string& l) { return l.rfind("macro", 0) == 0; });
  REQUIRE(macro != lines.end());
  CHECK(macro->find("1.000000") != std::string::npos);

  const json report = json::parse(read_file(dir.file("report.json")));
  CHECK(report["macro"]["f1"] == 1.0);
  CHECK(report["total"] == kTacticCount);
  // Every printed class row matches the report file.
  for (const json& c : report["classes"]) {
    const std::string name = c["name"];
    const auto row = std::find_if(lines.begin(), lines.end(), [&](const std::string& l) { return l.rfind(name + " ", 0) == 0; });
    REQUIRE(row != lines.end());
    std::istringstream fields(*row);
    std::string n;
    std::size_t retrieved, relevant, hits;
    double p, rc, f;
    fields >> n >> retrieved >> relevant >> hits >> p >> rc >> f;
    CHECK(retrieved == c["retrieved"]);
    CHECK(p == c["precision"].get<double>());
    CHECK(f == c["f1"].get<double>());
  }
  double pct = 0;
  for (const auto& [k, v] : report["distribution"].items()) pct += v.get<double>();
  CHECK(pct == doctest::Approx(100.0));
  const auto total = std::find_if(lines.begin(), lines.end(), [](const std::string& l) { return l.rfind("total", 0) == 0; });
  REQUIRE(total != lines.end());
  CHECK(total->find("100.000000") != std::string::npos);

  write_file(dir.file("nogold.jsonl"), "{\"id\":\"q\",\"trees\":[\"(NN)\"]}\n");
  CHECK(run_cli({"evaluate", dir.file("nogold.jsonl"), "--prototypes", dir.file("p.json")}).code == cli::kExitData);
}

TEST_CASE("sweep") {
  TempDir dir;
  std::mt19937_64 rng(4);
  write_file(dir.file("c.jsonl"), synthetic_corpus_file(rng, 8, 0.05, nullptr, 6));

  SUBCASE("sensitivity reruns are identical") {
    const std::vector<std::string> args = {"sweep", dir.file("c.jsonl"), "--kind", "sensitivity", "--sizes", "10,100",
                                           "--trials", "5", "--seed", "7"};
    auto a = args, b = args;
    a.insert(a.end(), {"--out", dir.file("s1.tsv")});
    b.insert(b.end(), {"--out", dir.file("s2.tsv")});
    REQUIRE(run_cli(a).code == 0);
    REQUIRE(run_cli(b).code == 0);
    CHECK(read_file(dir.file("s1.tsv")) == read_file(dir.file("s2.tsv")));
    CHECK(lines_of(read_file(dir.file("s1.tsv"))).size() == 3);

    const auto too_big = run_cli({"sweep", dir.file("c.jsonl"), "--kind", "sensitivity", "--sizes", "100000"});
    CHECK(too_big.code == cli::kExitData);
    const auto defaults = run_cli({"sweep", dir.file("c.jsonl"), "--kind", "sensitivity"});
    REQUIRE(defaults.code == 0);
    CHECK(lines_of(defaults.out).size() == 4);  // header, 10, 100, all
  }

  SUBCASE("default parameter grid") {
    const auto r = run_cli({"sweep", dir.file("c.jsonl"), "--kind", "params", "--trials", "1"});
    REQUIRE(r.code == 0);
    const auto lines = lines_of(r.out);
    CHECK(lines.size() == 31);
    CHECK(lines[0].rfind("fraction\tsegments", 0) == 0);
    const auto median = run_cli({"sweep", dir.file("c.jsonl"), "--kind", "params", "--method", "median", "--trials", "1"});
    CHECK(lines_of(median.out).size() == 7);
  }

  SUBCASE("threshold column follows the requested order") {
    const auto r = run_cli({"sweep", dir.file("c.jsonl"), "--kind", "threshold", "--thresholds", "0:0.05:0.5"});
    REQUIRE(r.code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 12);
    double last = -1.0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const double t = std::stod(lines[i].substr(0, lines[i].find('\t')));
      CHECK(t > last);
      last = t;
    }
    CHECK(last == 0.5);
  }

  SUBCASE("bad kind") {
    CHECK(run_cli({"sweep", dir.file("c.jsonl"), "--kind", "grid"}).code == cli::kExitConfig);
  }
}
