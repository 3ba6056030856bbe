#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "oxmc/decoder.hpp"
#include "oxmc/rng.hpp"
#include "support/oracles.hpp"

using namespace oxmc;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vocab word_vocab(int n_words) {
  std::vector<std::string> tokens{"<pad>", "<unk>", "<bos>", "<eos>", "<sep>", "<bok>", "<eok>"};
  for (int i = 0; i < n_words; ++i) tokens.push_back("w" + std::to_string(i));
  return Vocab::from_tokens(std::move(tokens));
}

std::vector<TokenId> admissible(const std::vector<TokenId>& state, std::size_t vocab_size, int k,
                                int max_per_kp) {
  std::vector<double> scores(vocab_size, 0.0);
  pusl_topk_mask(state, scores, k, max_per_kp);
  std::vector<TokenId> ok;
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (scores[i] != -kInf) ok.push_back(TokenId(i));
  return ok;
}

NgramScorer trained_model(const Vocab& v, const std::vector<std::vector<TokenId>>& seqs, int order,
                          double alpha) {
  NgramScorer m(v, order, alpha);
  for (const auto& s : seqs) m.add_sequence(s);
  return m;
}

}  // namespace

TEST_CASE("mask allows only sequence end once k keyphrases closed") {
  Vocab v = word_vocab(3);
  TokenId w = v.id_of("w0");
  std::vector<TokenId> state{tok::SEP, tok::BOK, w, tok::EOK, tok::BOK, w, tok::EOK};
  CHECK(admissible(state, v.size(), 2, 8) == std::vector<TokenId>{tok::EOS});
}

TEST_CASE("mask forces a span opener after a separator or closed span") {
  Vocab v = word_vocab(3);
  TokenId w = v.id_of("w0");
  CHECK(admissible({tok::SEP}, v.size(), 2, 8) == std::vector<TokenId>{tok::BOK});
  CHECK(admissible({tok::SEP, tok::BOK, w, tok::EOK}, v.size(), 2, 8) ==
        std::vector<TokenId>{tok::BOK});
}

TEST_CASE("mask right after a span opener admits only word tokens") {
  Vocab v = word_vocab(3);
  std::vector<TokenId> ok = admissible({tok::SEP, tok::BOK}, v.size(), 2, 8);
  REQUIRE(!ok.empty());
  for (TokenId t : ok) CHECK(Vocab::is_word_token(t));
  CHECK(std::find(ok.begin(), ok.end(), tok::EOK) == ok.end());  // no empty keyphrase
  CHECK(std::find(ok.begin(), ok.end(), tok::UNK) != ok.end());  // unknown word still a word
}

TEST_CASE("mask inside a span admits words plus the closer, then forces the closer") {
  Vocab v = word_vocab(3);
  TokenId w = v.id_of("w0");
  std::vector<TokenId> ok = admissible({tok::SEP, tok::BOK, w}, v.size(), 2, 8);
  CHECK(std::find(ok.begin(), ok.end(), tok::EOK) != ok.end());
  CHECK(std::find(ok.begin(), ok.end(), w) != ok.end());
  CHECK(std::find(ok.begin(), ok.end(), tok::EOS) == ok.end());
  CHECK(std::find(ok.begin(), ok.end(), tok::BOK) == ok.end());
  // span already at the per-keyphrase cap
  CHECK(admissible({tok::SEP, tok::BOK, w, w}, v.size(), 2, 2) == std::vector<TokenId>{tok::EOK});
}

TEST_CASE("mask never dead-ends under adversarial token choices") {
  Vocab v = word_vocab(3);  // 10 tokens total
  REQUIRE(v.size() == 10);
  const int k = 3, cap = 2;
  // strategy 0: first admissible; 1: last admissible; 2..: seeded random
  for (int strategy = 0; strategy < 6; ++strategy) {
    Rng rng{std::uint64_t(strategy)};
    std::vector<TokenId> state{tok::BOS, v.id_of("w0"), tok::SEP};
    int eoks = 0, steps = 0;
    while (eoks < k) {
      std::vector<TokenId> ok = admissible(state, v.size(), k, cap);
      REQUIRE(!ok.empty());
      TokenId pick = strategy == 0   ? ok.front()
                     : strategy == 1 ? ok.back()
                                     : ok[rng.bounded(ok.size())];
      state.push_back(pick);
      if (pick == tok::EOK) ++eoks;
      ++steps;
      REQUIRE(steps <= k * (cap + 2));  // mask structure bounds every walk
    }
    CHECK(admissible(state, v.size(), k, cap) == std::vector<TokenId>{tok::EOS});
  }
}

TEST_CASE("mask rejects an empty state") {
  std::vector<double> scores(10, 0.0);
  std::vector<TokenId> empty;
  CHECK_THROWS_AS(pusl_topk_mask(empty, scores, 3, 8), Error);
}

TEST_CASE("constrained decode returns exactly k non-empty keyphrases") {
  Vocab v = word_vocab(4);
  TokenId a = v.id_of("w0"), b = v.id_of("w1");
  NgramScorer model = trained_model(
      v, {{tok::BOS, a, tok::SEP, tok::BOK, a, tok::EOK, tok::BOK, b, tok::EOK}}, 3, 0.01);
  for (int k : {1, 3, 7}) {
    DecodeRequest req;
    req.paradigm = Paradigm::pusl;
    req.k = k;
    DecodeResult res = decode_pusl_topk(model, "w0", req);
    CHECK(res.termination == Termination::k_reached);
    CHECK(int(res.keyphrases.size()) == k);
    for (const Keyphrase& kp : res.keyphrases) CHECK(!kp.words.empty());
    CHECK(std::count(res.trace.begin(), res.trace.end(), tok::EOK) == k);
  }
}

TEST_CASE("constrained decode keeps generating past the training label count") {
  // only 3 distinct labels trained; asking for 5 forces repeats, never a stall
  Vocab v = word_vocab(3);
  TokenId a = v.id_of("w0"), b = v.id_of("w1"), c = v.id_of("w2");
  NgramScorer model =
      trained_model(v,
                    {{tok::BOS, a, tok::SEP, tok::BOK, a, tok::EOK, tok::BOK, b, tok::EOK,
                      tok::BOK, c, tok::EOK}},
                    3, 0.01);
  DecodeRequest req;
  req.k = 5;
  DecodeResult res = decode_pusl_topk(model, "w0", req);
  CHECK(res.keyphrases.size() == 5);
}

TEST_CASE("constrained decode reports budget exhaustion by exception") {
  Vocab v = word_vocab(3);
  NgramScorer model(v, 2, 0.1);
  DecodeRequest req;
  req.k = 10;
  req.max_total_tokens = 4;
  try {
    decode_pusl_topk(model, "w0", req);
    FAIL("expected budget_exhausted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::budget_exhausted);
  }
}

TEST_CASE("sampled constrained decode is reproducible per seed") {
  Vocab v = word_vocab(5);
  Rng rng(99);
  std::vector<std::vector<TokenId>> seqs;
  for (int i = 0; i < 20; ++i) {
    std::vector<TokenId> s{tok::BOS, TokenId(tok::first_word + rng.bounded(5)), tok::SEP};
    for (int j = 0; j < 3; ++j) {
      s.push_back(tok::BOK);
      s.push_back(TokenId(tok::first_word + rng.bounded(5)));
      s.push_back(tok::EOK);
    }
    seqs.push_back(std::move(s));
  }
  NgramScorer model = trained_model(v, seqs, 3, 0.05);
  DecodeRequest req;
  req.k = 4;
  req.mode = DecodeMode::sampled;
  req.temperature = 1.0;
  req.seed = 1234;
  DecodeResult r1 = decode_pusl_topk(model, "w1 w2", req);
  DecodeResult r2 = decode_pusl_topk(model, "w1 w2", req);
  CHECK(r1.trace == r2.trace);
  CHECK(r1.keyphrases.size() == r2.keyphrases.size());
  req.temperature = 0.0;
  CHECK_THROWS_AS(decode_pusl_topk(model, "w1 w2", req), Error);
}

TEST_CASE("free-running decode replays a memorized sequence and stops at its end") {
  Vocab v = word_vocab(3);
  TokenId t = v.id_of("w0"), a = v.id_of("w1"), b = v.id_of("w2");
  NgramScorer model = trained_model(
      v, {{tok::BOS, t, tok::SEP, tok::BOK, a, tok::EOK, tok::BOK, b, tok::EOK, tok::EOS}}, 5,
      0.001);
  DecodeRequest req;
  req.paradigm = Paradigm::one2seq;
  req.k = 10;
  DecodeResult res = decode_one2seq(model, "w0", req);
  CHECK(res.termination == Termination::eos);
  CHECK(res.trace ==
        std::vector<TokenId>{tok::BOK, a, tok::EOK, tok::BOK, b, tok::EOK});
  REQUIRE(res.keyphrases.size() == 2);
  CHECK(res.keyphrases[0].render() == "w1");
  CHECK(res.keyphrases[1].render() == "w2");
}

TEST_CASE("free-running decode can end with no keyphrases at all") {
  Vocab v = word_vocab(2);
  TokenId t = v.id_of("w0");
  NgramScorer model = trained_model(v, {{tok::BOS, t, tok::SEP, tok::EOS}}, 4, 0.001);
  DecodeRequest req;
  req.paradigm = Paradigm::one2seq;
  DecodeResult res = decode_one2seq(model, "w0", req);
  CHECK(res.termination == Termination::eos);
  CHECK(res.keyphrases.empty());
  CHECK(res.trace.empty());
}

TEST_CASE("free-running decode hits the token budget when the model never ends") {
  Vocab v = word_vocab(2);
  TokenId t = v.id_of("w0"), a = v.id_of("w1");
  // EOS-free training loop: after EOK the model opens another span forever
  NgramScorer model = trained_model(
      v, {{tok::BOS, t, tok::SEP, tok::BOK, a, tok::EOK, tok::BOK, a, tok::EOK, tok::BOK, a,
           tok::EOK}},
      3, 1e-6);
  DecodeRequest req;
  req.paradigm = Paradigm::one2seq;
  req.max_total_tokens = 30;
  DecodeResult res = decode_one2seq(model, "w0", req);
  CHECK(res.termination == Termination::budget);
  CHECK(res.trace.size() == 30);
  CHECK(res.keyphrases.size() >= 8);  // 3 tokens per span, spans keep closing
}

TEST_CASE("beam decode validates its configuration") {
  Vocab v = word_vocab(2);
  NgramScorer model(v, 2, 0.1);
  DecodeRequest req;
  req.paradigm = Paradigm::one2one;
  req.k = 3;
  req.beam_width = 2;  // narrower than k
  CHECK_THROWS_AS(beam_decode_one2one(model, "w0", req), Error);
  req.k = 0;
  CHECK_THROWS_AS(beam_decode_one2one(model, "w0", req), Error);
}

TEST_CASE("beam decode with width 1 returns one completed keyphrase") {
  Vocab v = word_vocab(3);
  TokenId t = v.id_of("w0"), a = v.id_of("w1");
  NgramScorer model = trained_model(
      v, {{tok::BOS, t, tok::SEP, tok::BOK, a, tok::EOK, tok::EOS}}, 4, 0.001);
  DecodeRequest req;
  req.paradigm = Paradigm::one2one;
  req.k = 1;
  req.beam_width = 1;
  DecodeResult res = beam_decode_one2one(model, "w0", req);
  REQUIRE(res.keyphrases.size() == 1);
  CHECK(res.keyphrases[0].render() == "w1");
  CHECK(res.termination == Termination::k_reached);
}

TEST_CASE("beam decode deduplicates keyphrases that render identically") {
  // two distinct ids spell the same word; untrained model scores them equally
  std::vector<std::string> tokens{"<pad>", "<unk>", "<bos>", "<eos>", "<sep>",
                                  "<bok>", "<eok>", "x",     "x"};
  Vocab v = Vocab::from_tokens(std::move(tokens));
  NgramScorer model(v, 2, 0.1);
  DecodeRequest req;
  req.paradigm = Paradigm::one2one;
  req.k = 3;
  req.beam_width = 8;
  req.max_tokens_per_kp = 1;
  DecodeResult res = beam_decode_one2one(model, "x", req);
  // word tokens are <unk>, x, x; dedup collapses the two x spellings
  REQUIRE(res.keyphrases.size() == 2);
  CHECK(res.termination == Termination::budget);
  std::vector<std::string> rendered;
  for (const Keyphrase& kp : res.keyphrases) rendered.push_back(kp.render());
  std::sort(rendered.begin(), rendered.end());
  CHECK(rendered == std::vector<std::string>{"<unk>", "x"});
}

TEST_CASE("wide beam equals exhaustive enumeration on small vocabularies") {
  Rng rng(777);
  for (int round = 0; round < 12; ++round) {
    int n_words = 1 + int(rng.bounded(6));  // word tokens incl. <unk>: 2..7
    Vocab v = word_vocab(n_words);
    NgramScorer model(v, 2 + int(rng.bounded(3)), 0.01 + 0.2 * rng.next_double());
    int n_seqs = 1 + int(rng.bounded(8));
    for (int s = 0; s < n_seqs; ++s) {
      std::vector<TokenId> seq{tok::BOS};
      std::size_t len = 3 + rng.bounded(10);
      for (std::size_t j = 0; j < len; ++j) seq.push_back(TokenId(rng.bounded(v.size())));
      model.add_sequence(seq);
    }
    DecodeRequest req;
    req.paradigm = Paradigm::one2one;
    req.k = 1 + int(rng.bounded(10));
    req.max_tokens_per_kp = 3;
    req.beam_width = 512;  // above the full hypothesis count, pruning never bites
    std::string text = "w0";
    DecodeResult beam = beam_decode_one2one(model, text, req);

    std::vector<TokenId> base{tok::BOS, v.id_of("w0"), tok::SEP, tok::BOK};
    std::vector<oracle::ScoredKp> want = oracle::exhaustive_one2one_ref(model, base, 3, req.k);
    REQUIRE(beam.keyphrases.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
      std::string want_render;
      for (TokenId t : want[i].tokens) {
        if (!want_render.empty()) want_render += ' ';
        want_render += v.token_of(t);
      }
      CHECK(beam.keyphrases[i].render() == want_render);
    }
  }
}

TEST_CASE("decode dispatches on the requested paradigm") {
  Vocab v = word_vocab(3);
  TokenId t = v.id_of("w0"), a = v.id_of("w1");
  NgramScorer model = trained_model(
      v, {{tok::BOS, t, tok::SEP, tok::BOK, a, tok::EOK, tok::EOS}}, 4, 0.01);
  DecodeRequest req;
  req.k = 2;
  req.beam_width = 4;
  req.paradigm = Paradigm::pusl;
  CHECK(decode(model, "w0", req).keyphrases.size() == 2);
  req.paradigm = Paradigm::one2seq;
  CHECK(decode(model, "w0", req).termination == Termination::eos);
  req.paradigm = Paradigm::one2one;
  CHECK(!decode(model, "w0", req).keyphrases.empty());
}
