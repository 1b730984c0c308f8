#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace parsetactic {

// The fourteen fine-grained persuasion tactics. The enumeration order is the
// tie-breaking order used by the classifier.
enum class Tactic : std::uint8_t {
  Outcome,
  SocialEsteem,
  ThreatPromise,
  SelfFeeling,
  GoodBadTraits,
  DeonticMoralAppeal,
  VIP,
  Popularity,
  FavorsDebts,
  Consistency,
  Empathy,
  Scarcity,
  Recharacterization,
  Reasoning,
};

inline constexpr std::size_t kTacticCount = 14;

inline constexpr std::array<Tactic, kTacticCount> kAllTactics = {
    Tactic::Outcome,         Tactic::SocialEsteem,       Tactic::ThreatPromise,
    Tactic::SelfFeeling,     Tactic::GoodBadTraits,      Tactic::DeonticMoralAppeal,
    Tactic::VIP,             Tactic::Popularity,         Tactic::FavorsDebts,
    Tactic::Consistency,     Tactic::Empathy,            Tactic::Scarcity,
    Tactic::Recharacterization, Tactic::Reasoning,
};

// A gold label or a classifier decision: a tactic, or std::nullopt for a
// non-argument.
using Label = std::optional<Tactic>;

inline constexpr std::string_view kNonArgumentName = "non-argument";

constexpr std::size_t index_of(Tactic t) noexcept { return static_cast<std::size_t>(t); }

// Canonical lowercase snake_case name, e.g. "deontic_moral_appeal".
std::string_view tactic_name(Tactic t) noexcept;

// Human-readable name as printed in reports, e.g. "Deontic/Moral Appeal".
std::string_view tactic_display_name(Tactic t) noexcept;

std::string_view label_name(const Label& label) noexcept;

// Lowercases and folds every run of non-alphanumeric characters into a single
// underscore: "Deontic/Moral Appeal" -> "deontic_moral_appeal".
std::string normalize_tactic_name(std::string_view name);

// Maps canonical names and aliases onto labels. Lookups go through
// normalize_tactic_name, so spelling variants of a registered name match.
class TacticNameTable {
 public:
  // Canonical names, display names and a handful of common aliases.
  TacticNameTable();

  void add_alias(std::string_view alias, Label label);

  // std::nullopt when the name is unknown; otherwise the label (which itself
  // may be the non-argument label).
  std::optional<Label> lookup(std::string_view name) const;

 private:
  std::map<std::string, Label, std::less<>> names_;
};

}  // namespace parsetactic
