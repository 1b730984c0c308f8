#pragma once

#include <string>

#include "parsetactic/tactic.hpp"
#include "parsetactic/treebank.hpp"

namespace parsetactic {

// An argument with its parse string and gold label (a tactic or non-argument).
struct LabeledArgument {
  std::string id;
  ParseString parse;
  Label gold;
  std::string source;
};

}  // namespace parsetactic
