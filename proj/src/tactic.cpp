#include "parsetactic/tactic.hpp"

#include <cctype>

namespace parsetactic {

namespace {

struct TacticNames {
  std::string_view canonical;
  std::string_view display;
};

constexpr std::array<TacticNames, kTacticCount> kNames = {{
    {"outcome", "Outcome"},
    {"social_esteem", "Social Esteem"},
    {"threat_promise", "Threat/Promise"},
    {"self_feeling", "Self-Feeling"},
    {"good_bad_traits", "Good/Bad Traits"},
    {"deontic_moral_appeal", "Deontic/Moral Appeal"},
    {"vip", "VIP"},
    {"popularity", "Popularity"},
    {"favors_debts", "Favors/Debts"},
    {"consistency", "Consistency"},
    {"empathy", "Empathy"},
    {"scarcity", "Scarcity"},
    {"recharacterization", "Recharacterization"},
    {"reasoning", "Reasoning"},
}};

}  // namespace

std::string_view tactic_name(Tactic t) noexcept { return kNames[index_of(t)].canonical; }

std::string_view tactic_display_name(Tactic t) noexcept { return kNames[index_of(t)].display; }

std::string_view label_name(const Label& label) noexcept {
  return label ? tactic_name(*label) : kNonArgumentName;
}

std::string normalize_tactic_name(std::string_view name) {
  std::string out;
  out.reserve(name.size());
  bool pending_sep = false;
  for (char c : name) {
    const auto uc = static_cast<unsigned char>(c);
    if (std::isalnum(uc)) {
      if (pending_sep && !out.empty()) out.push_back('_');
      pending_sep = false;
      out.push_back(static_cast<char>(std::tolower(uc)));
    } else {
      pending_sep = true;
    }
  }
  return out;
}

TacticNameTable::TacticNameTable() {
  for (Tactic t : kAllTactics) {
    add_alias(tactic_name(t), t);
    add_alias(tactic_display_name(t), t);
  }
  add_alias("outcomes", Tactic::Outcome);
  add_alias("social", Tactic::SocialEsteem);
  add_alias("threat", Tactic::ThreatPromise);
  add_alias("promise", Tactic::ThreatPromise);
  add_alias("good_traits", Tactic::GoodBadTraits);
  add_alias("bad_traits", Tactic::GoodBadTraits);
  add_alias("deontic", Tactic::DeonticMoralAppeal);
  add_alias("moral_appeal", Tactic::DeonticMoralAppeal);
  add_alias("favors", Tactic::FavorsDebts);
  add_alias("debts", Tactic::FavorsDebts);
  add_alias("reason", Tactic::Reasoning);
  add_alias(kNonArgumentName, std::nullopt);
  add_alias("nonargument", std::nullopt);
  add_alias("none", std::nullopt);
}

void TacticNameTable::add_alias(std::string_view alias, Label label) {
  names_.insert_or_assign(normalize_tactic_name(alias), label);
}

std::optional<Label> TacticNameTable::lookup(std::string_view name) const {
  auto it = names_.find(normalize_tactic_name(name));
  if (it == names_.end()) return std::nullopt;
  return it->second;
}

}  // namespace parsetactic
