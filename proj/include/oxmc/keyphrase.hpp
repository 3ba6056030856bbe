#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace oxmc {

// A multi-word label in canonical form: lowercase words, no empty words.
// Matching anywhere in the project is exact string equality on render().
struct Keyphrase {
  std::vector<std::string> words;

  std::string render() const;
  auto operator<=>(const Keyphrase&) const = default;
};

// Lowercase (ASCII) and split on whitespace; empty result allowed.
std::vector<std::string> normalize_words(std::string_view raw);

// Throws Errc::empty_keyphrase on empty/whitespace-only input.
Keyphrase normalize_keyphrase(std::string_view raw);

}  // namespace oxmc
