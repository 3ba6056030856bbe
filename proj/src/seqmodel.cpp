#include "oxmc/seqmodel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>

#include "oxmc/io.hpp"

namespace oxmc {

namespace {

const char* kReserved[] = {"<pad>", "<unk>", "<bos>", "<eos>", "<sep>", "<bok>", "<eok>"};
constexpr std::size_t kNumReserved = 7;
constexpr char kMagic[8] = {'O', 'X', 'N', 'G', 'R', 'M', '0', '1'};

}  // namespace

Paradigm parse_paradigm(std::string_view name) {
  if (name == "one2one") return Paradigm::one2one;
  if (name == "one2seq") return Paradigm::one2seq;
  if (name == "pusl") return Paradigm::pusl;
  raise(Errc::invalid_config, "unknown paradigm '" + std::string(name) + "'");
}

std::string_view paradigm_name(Paradigm p) {
  switch (p) {
    case Paradigm::one2one: return "one2one";
    case Paradigm::one2seq: return "one2seq";
    case Paradigm::pusl: return "pusl";
  }
  return "?";
}

Vocab::Vocab() {
  for (std::size_t i = 0; i < kNumReserved; ++i) {
    id_to_token_.emplace_back(kReserved[i]);
    token_to_id_.emplace(kReserved[i], static_cast<TokenId>(i));
  }
}

Vocab Vocab::build(const Dataset& d, std::uint64_t min_freq) {
  if (d.empty()) raise(Errc::empty_dataset, "cannot build a vocabulary from an empty dataset");
  if (min_freq < 1) raise(Errc::invalid_config, "min_freq must be >= 1");
  std::map<std::string, std::uint64_t> freq;  // ordered: lexicographic tie-break below
  for (const Instance& inst : d.instances) {
    for (const std::string& w : normalize_words(inst.text)) ++freq[w];
    for (const LabelEntry& le : inst.labels)
      for (const std::string& w : le.kp.words) ++freq[w];
  }
  std::vector<std::pair<std::string, std::uint64_t>> items(freq.begin(), freq.end());
  std::stable_sort(items.begin(), items.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  Vocab v;
  for (auto& [word, f] : items) {
    if (f < min_freq) continue;
    if (v.token_to_id_.count(word)) continue;  // a corpus word spelled like a reserved token
    v.token_to_id_.emplace(word, static_cast<TokenId>(v.id_to_token_.size()));
    v.id_to_token_.push_back(word);
  }
  return v;
}

Vocab Vocab::from_tokens(std::vector<std::string> id_to_token) {
  if (id_to_token.size() < kNumReserved)
    raise(Errc::parse_error, "vocabulary is missing reserved tokens");
  for (std::size_t i = 0; i < kNumReserved; ++i)
    if (id_to_token[i] != kReserved[i])
      raise(Errc::parse_error, "vocabulary reserved token mismatch at id " + std::to_string(i));
  Vocab v;
  v.id_to_token_ = std::move(id_to_token);
  v.token_to_id_.clear();
  for (std::size_t i = 0; i < v.id_to_token_.size(); ++i)
    v.token_to_id_.emplace(v.id_to_token_[i], static_cast<TokenId>(i));
  return v;
}

TokenId Vocab::id_of(std::string_view word) const {
  auto it = token_to_id_.find(std::string(word));
  return it == token_to_id_.end() ? tok::UNK : it->second;
}

const std::string& Vocab::token_of(TokenId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= id_to_token_.size())
    raise(Errc::invalid_config, "token id out of range: " + std::to_string(id));
  return id_to_token_[static_cast<std::size_t>(id)];
}

std::vector<TokenId> Vocab::encode(const std::vector<std::string>& words) const {
  std::vector<TokenId> ids;
  ids.reserve(words.size());
  for (const std::string& w : words) ids.push_back(id_of(w));
  return ids;
}

std::vector<TrainingSequence> build_training_sequences(const Instance& inst, Paradigm paradigm,
                                                       const Vocab& vocab,
                                                       std::size_t max_text_tokens,
                                                       std::uint64_t weight) {
  if (inst.labels.empty()) raise(Errc::no_labels, "instance '" + inst.item_id + "' has no labels");
  std::vector<std::string> text_words = normalize_words(inst.text);
  if (text_words.size() > max_text_tokens) text_words.resize(max_text_tokens);
  std::vector<TokenId> prefix;
  prefix.push_back(tok::BOS);
  for (TokenId id : vocab.encode(text_words)) prefix.push_back(id);
  prefix.push_back(tok::SEP);

  std::vector<TrainingSequence> out;
  if (paradigm == Paradigm::one2one) {
    for (const LabelEntry& le : inst.labels) {
      TrainingSequence seq{prefix, paradigm, weight};
      seq.ids.push_back(tok::BOK);
      for (TokenId id : vocab.encode(le.kp.words)) seq.ids.push_back(id);
      seq.ids.push_back(tok::EOK);
      seq.ids.push_back(tok::EOS);
      out.push_back(std::move(seq));
    }
    return out;
  }
  TrainingSequence seq{std::move(prefix), paradigm, weight};
  for (const LabelEntry& le : inst.labels) {
    seq.ids.push_back(tok::BOK);
    for (TokenId id : vocab.encode(le.kp.words)) seq.ids.push_back(id);
    seq.ids.push_back(tok::EOK);
  }
  if (paradigm == Paradigm::one2seq) seq.ids.push_back(tok::EOS);
  out.push_back(std::move(seq));
  return out;
}

NgramScorer::NgramScorer(Vocab vocab, int order, double alpha)
    : vocab_(std::move(vocab)), order_(order), alpha_(alpha) {
  if (order_ < 2) raise(Errc::invalid_config, "ngram order must be >= 2");
  if (!(alpha_ > 0.0)) raise(Errc::invalid_config, "smoothing alpha must be > 0");
  tables_.resize(static_cast<std::size_t>(order_));
}

void NgramScorer::add_sequence(const std::vector<TokenId>& ids, std::uint64_t weight) {
  if (weight == 0 || ids.size() < 2) return;
  for (std::size_t m = 0; m < tables_.size(); ++m) {
    // Target position p needs a full m-token context inside the sequence;
    // position 0 is never predicted (every query prefix starts at BOS).
    for (std::size_t p = std::max(m, std::size_t{1}); p < ids.size(); ++p) {
      std::vector<TokenId> ctx(ids.begin() + static_cast<std::ptrdiff_t>(p - m),
                               ids.begin() + static_cast<std::ptrdiff_t>(p));
      Cell& cell = tables_[m][std::move(ctx)];
      cell.next[ids[p]] += weight;
      cell.total += weight;
    }
  }
}

std::vector<double> NgramScorer::score_next(const std::vector<TokenId>& prefix) const {
  if (prefix.empty()) raise(Errc::empty_input, "score_next needs a non-empty prefix");
  const Cell* cell = nullptr;
  std::size_t longest = std::min(static_cast<std::size_t>(order_ - 1), prefix.size());
  for (std::size_t m = longest + 1; m-- > 0;) {
    std::vector<TokenId> ctx(prefix.end() - static_cast<std::ptrdiff_t>(m), prefix.end());
    auto it = tables_[m].find(ctx);
    if (it != tables_[m].end() && it->second.total > 0) {
      cell = &it->second;
      break;
    }
  }
  static const Cell kEmpty{};
  if (!cell) cell = &kEmpty;  // untrained model: uniform via smoothing

  std::size_t v = vocab_.size();
  double denom = static_cast<double>(cell->total) + alpha_ * static_cast<double>(v);
  std::vector<double> scores(v);
  double log_base = std::log(alpha_) - std::log(denom);
  for (std::size_t i = 0; i < v; ++i) scores[i] = log_base;
  for (const auto& [token, count] : cell->next)
    scores[static_cast<std::size_t>(token)] =
        std::log(static_cast<double>(count) + alpha_) - std::log(denom);
  return scores;
}

bool NgramScorer::operator==(const NgramScorer& other) const {
  return vocab_ == other.vocab_ && order_ == other.order_ && alpha_ == other.alpha_ &&
         tables_ == other.tables_;
}

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  char buf[4];
  std::memcpy(buf, &v, 4);
  out.append(buf, 4);
}

void put_u64(std::string& out, std::uint64_t v) {
  char buf[8];
  std::memcpy(buf, &v, 8);
  out.append(buf, 8);
}

void put_i32(std::string& out, std::int32_t v) {
  char buf[4];
  std::memcpy(buf, &v, 4);
  out.append(buf, 4);
}

class Reader {
 public:
  explicit Reader(std::string_view data) : data_(data) {}

  std::uint32_t u32() { return get<std::uint32_t>(); }
  std::uint64_t u64() { return get<std::uint64_t>(); }
  std::int32_t i32() { return get<std::int32_t>(); }

  std::string_view bytes(std::size_t n) {
    need(n);
    std::string_view out = data_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  bool done() const { return pos_ == data_.size(); }

 private:
  template <typename T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }

  void need(std::size_t n) const {
    if (pos_ + n > data_.size()) raise(Errc::parse_error, "truncated model file");
  }

  std::string_view data_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string NgramScorer::serialize() const {
  std::string out;
  out.append(kMagic, sizeof(kMagic));
  put_u32(out, static_cast<std::uint32_t>(order_));
  put_u64(out, std::bit_cast<std::uint64_t>(alpha_));
  put_u64(out, vocab_.size());
  for (const std::string& tk : vocab_.tokens()) {
    put_u32(out, static_cast<std::uint32_t>(tk.size()));
    out.append(tk);
  }
  for (const auto& table : tables_) {
    put_u64(out, table.size());
    for (const auto& [ctx, cell] : table) {
      for (TokenId id : ctx) put_i32(out, id);
      put_u64(out, cell.next.size());
      for (const auto& [token, count] : cell.next) {
        put_i32(out, token);
        put_u64(out, count);
      }
    }
  }
  return out;
}

NgramScorer NgramScorer::deserialize(std::string_view bytes) {
  Reader r(bytes);
  if (r.bytes(sizeof(kMagic)) != std::string_view(kMagic, sizeof(kMagic)))
    raise(Errc::parse_error, "not a model file (bad magic)");
  int order = static_cast<int>(r.u32());
  double alpha = std::bit_cast<double>(r.u64());
  std::uint64_t vsize = r.u64();
  std::vector<std::string> tokens;
  tokens.reserve(vsize);
  for (std::uint64_t i = 0; i < vsize; ++i) {
    std::uint32_t len = r.u32();
    tokens.emplace_back(r.bytes(len));
  }
  NgramScorer model(Vocab::from_tokens(std::move(tokens)), order, alpha);
  for (int m = 0; m < order; ++m) {
    std::uint64_t n_ctx = r.u64();
    for (std::uint64_t c = 0; c < n_ctx; ++c) {
      std::vector<TokenId> ctx(static_cast<std::size_t>(m));
      for (int j = 0; j < m; ++j) ctx[static_cast<std::size_t>(j)] = r.i32();
      Cell cell;
      std::uint64_t n_next = r.u64();
      for (std::uint64_t j = 0; j < n_next; ++j) {
        TokenId token = r.i32();
        std::uint64_t count = r.u64();
        cell.next.emplace(token, count);
        cell.total += count;
      }
      model.tables_[static_cast<std::size_t>(m)].emplace(std::move(ctx), std::move(cell));
    }
  }
  if (!r.done()) raise(Errc::parse_error, "trailing bytes in model file");
  return model;
}

void NgramScorer::save(const std::filesystem::path& p) const {
  io::atomic_write_file(p, serialize());
}

NgramScorer NgramScorer::load(const std::filesystem::path& p) {
  return deserialize(io::read_file(p));
}

NgramScorer train_ngram(const std::vector<TrainingSequence>& seqs, const Vocab& vocab, int order,
                        double alpha) {
  if (seqs.empty()) raise(Errc::no_sequences, "ngram training needs at least one sequence");
  NgramScorer model(vocab, order, alpha);
  for (const TrainingSequence& seq : seqs) model.add_sequence(seq.ids, seq.weight);
  return model;
}

}  // namespace oxmc
