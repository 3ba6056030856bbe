#include "oxmc/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "oxmc/kernels.hpp"
#include "oxmc/rng.hpp"

namespace oxmc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<TokenId> encode_context(const NgramScorer& model, const std::string& item_text,
                                    std::size_t max_text_tokens) {
  std::vector<std::string> words = normalize_words(item_text);
  if (words.size() > max_text_tokens) words.resize(max_text_tokens);
  std::vector<TokenId> prefix;
  prefix.reserve(words.size() + 2);
  prefix.push_back(tok::BOS);
  for (TokenId id : model.vocab().encode(words)) prefix.push_back(id);
  prefix.push_back(tok::SEP);
  return prefix;
}

// Keeps only `keep`; everything else to -inf.
void mask_all_except(std::vector<double>& scores, TokenId keep) {
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (static_cast<TokenId>(i) != keep) scores[i] = kNegInf;
}

void mask_token(std::vector<double>& scores, TokenId t) {
  scores[static_cast<std::size_t>(t)] = kNegInf;
}

std::size_t count_token(const std::vector<TokenId>& ids, TokenId t) {
  return static_cast<std::size_t>(std::count(ids.begin(), ids.end(), t));
}

// Tokens since the last BOK; only meaningful inside a keyphrase.
int current_kp_len(const std::vector<TokenId>& ids) {
  int len = 0;
  for (std::size_t i = ids.size(); i-- > 0;) {
    if (ids[i] == tok::BOK) return len;
    ++len;
  }
  return len;
}

TokenId pick_token(const std::vector<double>& scores, const DecodeRequest& req, Rng& rng) {
  if (req.mode == DecodeMode::greedy)
    return static_cast<TokenId>(kernels::argmax(scores.data(), scores.size()));
  if (!(req.temperature > 0.0)) raise(Errc::invalid_config, "temperature must be > 0");
  // Temperature softmax; -inf entries get weight 0.
  double m = kernels::max(scores.data(), scores.size());
  std::vector<double> w(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i)
    w[i] = scores[i] == kNegInf ? 0.0 : std::exp((scores[i] - m) / req.temperature);
  double total = kernels::sum(w.data(), w.size());
  double r = rng.next_double() * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] <= 0.0) continue;
    acc += w[i];
    last_positive = i;
    if (r < acc) return static_cast<TokenId>(i);
  }
  return static_cast<TokenId>(last_positive);  // r landed on the rounding tail
}

// Closed BOK..EOK spans; stray structural tokens are skipped, spans without a
// word token are dropped.
std::vector<Keyphrase> parse_spans(const std::vector<TokenId>& trace, const Vocab& vocab) {
  std::vector<Keyphrase> out;
  bool open = false;
  Keyphrase cur;
  for (TokenId t : trace) {
    if (t == tok::BOK) {
      open = true;
      cur.words.clear();
    } else if (t == tok::EOK) {
      if (open && !cur.words.empty()) out.push_back(cur);
      open = false;
      cur.words.clear();
    } else if (open && Vocab::is_word_token(t)) {
      cur.words.push_back(vocab.token_of(t));
    }
  }
  return out;
}

}  // namespace

void pusl_topk_mask(const std::vector<TokenId>& tokens_so_far, std::vector<double>& scores, int k,
                    int max_tokens_per_kp) {
  if (tokens_so_far.empty()) raise(Errc::empty_input, "mask needs at least one token");
  std::size_t eok_count = count_token(tokens_so_far, tok::EOK);
  TokenId last = tokens_so_far.back();

  if (eok_count >= static_cast<std::size_t>(k)) {  // (a) budget of keyphrases met
    mask_all_except(scores, tok::EOS);
    return;
  }
  if (last == tok::EOK || last == tok::SEP) {  // (b) open the next keyphrase
    mask_all_except(scores, tok::BOK);
    return;
  }
  // Inside a keyphrase. Structural tokens are never words.
  mask_token(scores, tok::PAD);
  mask_token(scores, tok::BOS);
  mask_token(scores, tok::SEP);
  mask_token(scores, tok::BOK);
  mask_token(scores, tok::EOS);
  if (last == tok::BOK) {  // (c) no empty keyphrase
    mask_token(scores, tok::EOK);
  } else if (current_kp_len(tokens_so_far) >= max_tokens_per_kp) {  // (d) cap reached
    mask_all_except(scores, tok::EOK);
  }
}

DecodeResult decode_pusl_topk(const NgramScorer& model, const std::string& item_text,
                              const DecodeRequest& req) {
  if (req.k < 1) raise(Errc::invalid_config, "k must be >= 1");
  std::vector<TokenId> prefix = encode_context(model, item_text, req.max_text_tokens);
  Rng rng(req.seed);
  DecodeResult res;
  std::size_t eok_count = 0;
  while (eok_count < static_cast<std::size_t>(req.k)) {
    if (res.trace.size() >= static_cast<std::size_t>(req.max_total_tokens))
      raise(Errc::budget_exhausted,
            "token budget " + std::to_string(req.max_total_tokens) + " hit after " +
                std::to_string(eok_count) + " of " + std::to_string(req.k) + " keyphrases");
    std::vector<double> scores = model.score_next(prefix);
    pusl_topk_mask(prefix, scores, req.k, req.max_tokens_per_kp);
    TokenId t = pick_token(scores, req, rng);
    prefix.push_back(t);
    res.trace.push_back(t);
    if (t == tok::EOK) ++eok_count;
  }
  res.keyphrases = parse_spans(res.trace, model.vocab());
  res.termination = Termination::k_reached;
  return res;
}

DecodeResult decode_one2seq(const NgramScorer& model, const std::string& item_text,
                            const DecodeRequest& req) {
  std::vector<TokenId> prefix = encode_context(model, item_text, req.max_text_tokens);
  Rng rng(req.seed);
  DecodeResult res;
  res.termination = Termination::budget;
  while (res.trace.size() < static_cast<std::size_t>(req.max_total_tokens)) {
    std::vector<double> scores = model.score_next(prefix);
    TokenId t = pick_token(scores, req, rng);
    if (t == tok::EOS) {
      res.termination = Termination::eos;
      break;
    }
    prefix.push_back(t);
    res.trace.push_back(t);
  }
  res.keyphrases = parse_spans(res.trace, model.vocab());
  return res;
}

namespace {

struct Hypothesis {
  std::vector<TokenId> tokens;  // words only, EOK excluded
  double logprob = 0.0;
  int length = 0;  // tokens emitted including the closing EOK

  double normalized() const { return length > 0 ? logprob / length : kNegInf; }
};

// Higher normalized score first; ties by token sequence, lexicographic.
bool better(const Hypothesis& a, const Hypothesis& b) {
  if (a.normalized() != b.normalized()) return a.normalized() > b.normalized();
  return a.tokens < b.tokens;
}

}  // namespace

DecodeResult beam_decode_one2one(const NgramScorer& model, const std::string& item_text,
                                 const DecodeRequest& req) {
  if (req.k < 1) raise(Errc::invalid_config, "k must be >= 1");
  if (req.beam_width < req.k) raise(Errc::invalid_config, "beam width must be >= k");
  std::vector<TokenId> base = encode_context(model, item_text, req.max_text_tokens);
  base.push_back(tok::BOK);

  std::vector<Hypothesis> live{Hypothesis{}};
  std::vector<Hypothesis> completed;
  for (int step = 0; step <= req.max_tokens_per_kp && !live.empty(); ++step) {
    std::vector<Hypothesis> expanded;
    for (const Hypothesis& hyp : live) {
      std::vector<TokenId> prefix = base;
      prefix.insert(prefix.end(), hyp.tokens.begin(), hyp.tokens.end());
      std::vector<double> scores = model.score_next(prefix);
      bool may_close = !hyp.tokens.empty();
      bool must_close = static_cast<int>(hyp.tokens.size()) >= req.max_tokens_per_kp;
      for (std::size_t i = 0; i < scores.size(); ++i) {
        TokenId t = static_cast<TokenId>(i);
        bool word_ok = Vocab::is_word_token(t) && !must_close;
        bool close_ok = t == tok::EOK && may_close;
        if (!word_ok && !close_ok) continue;
        Hypothesis next = hyp;
        next.logprob += scores[i];
        ++next.length;
        if (t == tok::EOK) {
          completed.push_back(std::move(next));
        } else {
          next.tokens.push_back(t);
          expanded.push_back(std::move(next));
        }
      }
    }
    // Beam pruning on raw total log-probability; ties by token sequence.
    std::sort(expanded.begin(), expanded.end(), [](const Hypothesis& a, const Hypothesis& b) {
      if (a.logprob != b.logprob) return a.logprob > b.logprob;
      return a.tokens < b.tokens;
    });
    if (expanded.size() > static_cast<std::size_t>(req.beam_width))
      expanded.resize(static_cast<std::size_t>(req.beam_width));
    live = std::move(expanded);
  }

  std::sort(completed.begin(), completed.end(), better);
  DecodeResult res;
  std::vector<std::string> seen;
  for (const Hypothesis& hyp : completed) {
    if (res.keyphrases.size() == static_cast<std::size_t>(req.k)) break;
    Keyphrase kp;
    for (TokenId t : hyp.tokens) kp.words.push_back(model.vocab().token_of(t));
    std::string rendered = kp.render();
    if (std::find(seen.begin(), seen.end(), rendered) != seen.end()) continue;
    seen.push_back(std::move(rendered));
    for (TokenId t : hyp.tokens) res.trace.push_back(t);
    res.trace.push_back(tok::EOK);
    res.keyphrases.push_back(std::move(kp));
  }
  res.termination = res.keyphrases.size() == static_cast<std::size_t>(req.k)
                        ? Termination::k_reached
                        : Termination::budget;
  return res;
}

DecodeResult decode(const NgramScorer& model, const std::string& item_text,
                    const DecodeRequest& req) {
  switch (req.paradigm) {
    case Paradigm::pusl: return decode_pusl_topk(model, item_text, req);
    case Paradigm::one2seq: return decode_one2seq(model, item_text, req);
    case Paradigm::one2one: return beam_decode_one2one(model, item_text, req);
  }
  raise(Errc::invalid_config, "unknown paradigm");
}

}  // namespace oxmc
