#include "oxmc/keyphrase.hpp"

#include <cctype>

#include "oxmc/errors.hpp"

namespace oxmc {

std::string Keyphrase::render() const {
  std::string out;
  for (size_t i = 0; i < words.size(); ++i) {
    if (i) out += ' ';
    out += words[i];
  }
  return out;
}

std::vector<std::string> normalize_words(std::string_view raw) {
  std::vector<std::string> words;
  std::string cur;
  for (char c : raw) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) {
        words.push_back(std::move(cur));
        cur.clear();
      }
    } else {
      cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  if (!cur.empty()) words.push_back(std::move(cur));
  return words;
}

Keyphrase normalize_keyphrase(std::string_view raw) {
  Keyphrase kp{normalize_words(raw)};
  if (kp.words.empty())
    raise(Errc::empty_keyphrase, "keyphrase is empty after normalization: '" + std::string(raw) + "'");
  return kp;
}

}  // namespace oxmc
