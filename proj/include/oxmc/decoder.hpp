#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oxmc/seqmodel.hpp"

namespace oxmc {

enum class DecodeMode { greedy, sampled };
enum class Termination { k_reached, eos, budget };

struct DecodeRequest {
  Paradigm paradigm = Paradigm::pusl;
  int k = 10;
  int max_tokens_per_kp = 8;
  int max_total_tokens = 256;
  std::size_t max_text_tokens = 32;  // must match training-time truncation
  DecodeMode mode = DecodeMode::greedy;
  double temperature = 1.0;
  std::uint64_t seed = 0;
  int beam_width = 0;  // one2one only; >= k
};

struct DecodeResult {
  std::vector<Keyphrase> keyphrases;  // generation order, duplicates possible
  std::vector<TokenId> trace;         // generated target tokens (after SEP)
  Termination termination = Termination::k_reached;
};

// Top-k constrained-decoding mask, applied in place (-inf = banned):
//  (a) k keyphrases closed: only EOS;
//  (b) after EOK or SEP:    only BOK;
//  (c) right after BOK:     word tokens only (no empty keyphrase);
//  (d) inside a keyphrase:  word tokens or EOK; EOK forced at max_tokens_per_kp.
// Every case leaves at least one admissible token.
void pusl_topk_mask(const std::vector<TokenId>& tokens_so_far, std::vector<double>& scores, int k,
                    int max_tokens_per_kp = 8);

// Score, mask, pick (greedy argmax with lowest-id ties, or seeded temperature
// sampling) until k keyphrases close. Throws BudgetExhausted when
// max_total_tokens runs out first.
DecodeResult decode_pusl_topk(const NgramScorer& model, const std::string& item_text,
                              const DecodeRequest& req);

// Unconstrained decoding until EOS or budget; keyphrases parsed from closed
// BOK..EOK spans, malformed or empty spans dropped. May return fewer than k.
DecodeResult decode_one2seq(const NgramScorer& model, const std::string& item_text,
                            const DecodeRequest& req);

// Beam search over single keyphrases from a forced BOK. Hypotheses complete at
// EOK, ranked by length-normalized log-probability, ties by token-id sequence;
// deduplicated; top-k distinct returned.
DecodeResult beam_decode_one2one(const NgramScorer& model, const std::string& item_text,
                                 const DecodeRequest& req);

// Paradigm dispatch.
DecodeResult decode(const NgramScorer& model, const std::string& item_text,
                    const DecodeRequest& req);

}  // namespace oxmc
