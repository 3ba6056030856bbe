#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "oxmc/corpus.hpp"

namespace oxmc {

enum class Paradigm { one2one, one2seq, pusl };

Paradigm parse_paradigm(std::string_view name);  // InvalidConfig on unknown name
std::string_view paradigm_name(Paradigm p);

using TokenId = std::int32_t;

// Reserved ids, stable across vocabularies. Word tokens start at first_word.
namespace tok {
inline constexpr TokenId PAD = 0;
inline constexpr TokenId UNK = 1;
inline constexpr TokenId BOS = 2;
inline constexpr TokenId EOS = 3;
inline constexpr TokenId SEP = 4;
inline constexpr TokenId BOK = 5;
inline constexpr TokenId EOK = 6;
inline constexpr TokenId first_word = 7;
}  // namespace tok

class Vocab {
 public:
  Vocab();  // reserved tokens only

  // Words from texts and labels with occurrence count >= min_freq, ids by
  // descending frequency then lexicographic. Throws EmptyDataset.
  static Vocab build(const Dataset& d, std::uint64_t min_freq = 1);

  static Vocab from_tokens(std::vector<std::string> id_to_token);

  TokenId id_of(std::string_view word) const;  // UNK when absent
  const std::string& token_of(TokenId id) const;
  std::size_t size() const { return id_to_token_.size(); }
  std::vector<TokenId> encode(const std::vector<std::string>& words) const;

  // UNK counts as a word: it stands for an out-of-vocabulary word, so it is
  // admissible inside keyphrases.
  static bool is_word_token(TokenId id) { return id == tok::UNK || id >= tok::first_word; }

  const std::vector<std::string>& tokens() const { return id_to_token_; }
  bool operator==(const Vocab& other) const { return id_to_token_ == other.id_to_token_; }

 private:
  std::vector<std::string> id_to_token_;
  std::unordered_map<std::string, TokenId> token_to_id_;
};

struct TrainingSequence {
  std::vector<TokenId> ids;
  Paradigm paradigm = Paradigm::pusl;
  std::uint64_t weight = 1;  // count multiplier when training
};

// one2one: one sequence per label, BOS text SEP BOK kp EOK EOS.
// one2seq: BOS text SEP (BOK kp EOK)* EOS, labels in stored (frequency-desc) order.
// pusl:    one2seq without the trailing EOS.
// Text is truncated to max_text_tokens. Throws NoLabels.
std::vector<TrainingSequence> build_training_sequences(const Instance& inst, Paradigm paradigm,
                                                       const Vocab& vocab,
                                                       std::size_t max_text_tokens = 32,
                                                       std::uint64_t weight = 1);

// Count-based autoregressive scorer: add-alpha smoothing over the longest
// observed context, backing off only when that context was never seen.
class NgramScorer {
 public:
  NgramScorer(Vocab vocab, int order, double alpha);

  void add_sequence(const std::vector<TokenId>& ids, std::uint64_t weight = 1);

  // Log-probabilities over the whole vocab; exp-sum is 1. Throws EmptyInput
  // on an empty prefix.
  std::vector<double> score_next(const std::vector<TokenId>& prefix) const;

  const Vocab& vocab() const { return vocab_; }
  int order() const { return order_; }
  double alpha() const { return alpha_; }

  // Versioned little-endian binary; byte-stable for identical inputs.
  std::string serialize() const;
  static NgramScorer deserialize(std::string_view bytes);
  void save(const std::filesystem::path& p) const;
  static NgramScorer load(const std::filesystem::path& p);

  bool operator==(const NgramScorer& other) const;

 private:
  struct Cell {
    std::map<TokenId, std::uint64_t> next;
    std::uint64_t total = 0;
    bool operator==(const Cell&) const = default;
  };
  Vocab vocab_;
  int order_;
  double alpha_;
  // tables_[m]: m-token context -> next-token counts, m in 0..order-1.
  std::vector<std::map<std::vector<TokenId>, Cell>> tables_;
};

// Throws NoSequences on empty input.
NgramScorer train_ngram(const std::vector<TrainingSequence>& seqs, const Vocab& vocab, int order,
                        double alpha);

}  // namespace oxmc
