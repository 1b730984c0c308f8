#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "parsetactic/prototype.hpp"
#include "parsetactic/tactic.hpp"

namespace parsetactic::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFormat = 2,  // unreadable or malformed input
  kExitConfig = 3,  // invalid flags or parameter values
  kExitData = 4,    // well-formed input that cannot support the request
};

struct RunConfig {
  PrototypeMethod method = PrototypeMethod::Synthetic;
  double set_fraction = kDefaultSetFraction;
  std::size_t segments = kDefaultSegmentCount;
  std::optional<double> threshold;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  TacticNameTable names;
};

// "0.1,0.2" or an inclusive range "start:step:stop".
std::vector<double> parse_real_list(std::string_view text);

// Comma-separated counts; "all" maps to kAllInstances.
std::vector<std::size_t> parse_count_list(std::string_view text);

// Entry point shared by the executable and the tests. Messages go to err;
// data written with no --out goes to out.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace parsetactic::cli
