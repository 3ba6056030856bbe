#include "oxmc/biassim.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "oxmc/io.hpp"
#include "oxmc/metrics.hpp"
#include "oxmc/rng.hpp"

namespace oxmc {

namespace {

constexpr std::size_t kWordsPerCategory = 6;

const char* kSyllables[] = {"ba", "be", "bi", "bo", "bu", "da", "de", "di", "do", "du",
                            "ga", "ge", "gi", "go", "gu", "la", "le", "li", "lo", "lu",
                            "ma", "me", "mi", "mo", "mu", "na", "ne", "ni", "no", "nu",
                            "pa", "pe", "pi", "po", "pu", "ra", "re", "ri", "ro", "ru",
                            "sa", "se", "si", "so", "su", "ta", "te", "ti", "to", "tu"};
constexpr std::size_t kNumSyllables = sizeof(kSyllables) / sizeof(kSyllables[0]);

// Distinct pronounceable words: family prefix + base-50 syllable digits.
std::string make_word(char prefix, std::size_t index) {
  std::string w(1, prefix);
  do {
    w += kSyllables[index % kNumSyllables];
    index /= kNumSyllables;
  } while (index > 0);
  return w;
}

std::string category_word(std::size_t c) { return make_word('k', c); }
std::string item_word(std::size_t i) { return make_word('z', i); }

// Category label pool, fixed order: 6 singles then 30 ordered pairs.
Keyphrase pool_label(std::size_t cat, std::size_t pool_index) {
  std::size_t base = cat * kWordsPerCategory;
  if (pool_index < kWordsPerCategory) return Keyphrase{{category_word(base + pool_index)}};
  std::size_t p = pool_index - kWordsPerCategory;
  std::size_t i = p / (kWordsPerCategory - 1);
  std::size_t j = p % (kWordsPerCategory - 1);
  if (j >= i) ++j;  // skip the diagonal
  return Keyphrase{{category_word(base + i), category_word(base + j)}};
}

constexpr std::size_t kPoolSize = kWordsPerCategory + kWordsPerCategory * (kWordsPerCategory - 1);

std::size_t binomial(Rng& rng, std::size_t n, double p) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) hits += rng.next_double() < p ? 1 : 0;
  return hits;
}

// First k of a partial Fisher-Yates over 0..n-1.
std::vector<std::size_t> sample_distinct(Rng& rng, std::size_t n, std::size_t k) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.bounded(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return idx;
}

std::string pad_id(std::size_t i, std::size_t width) {
  std::string digits = std::to_string(i);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return "item-" + digits;
}

}  // namespace

Universe generate_universe(const UniverseConfig& cfg) {
  if (cfg.num_items < 1) raise(Errc::invalid_config, "universe needs at least one item");
  if (cfg.min_labels < 1) raise(Errc::invalid_config, "min_labels must be >= 1");
  if (cfg.max_labels < cfg.min_labels) raise(Errc::invalid_config, "max_labels < min_labels");
  if (cfg.max_labels > kPoolSize)
    raise(Errc::invalid_config,
          "max_labels exceeds the per-category label pool (" + std::to_string(kPoolSize) + ")");
  if (cfg.mean_labels < static_cast<double>(cfg.min_labels) ||
      cfg.mean_labels > static_cast<double>(cfg.max_labels))
    raise(Errc::invalid_config, "mean_labels must lie in [min_labels, max_labels]");
  if (cfg.vocab_words < kWordsPerCategory)
    raise(Errc::invalid_config, "vocab_words must be >= " + std::to_string(kWordsPerCategory));
  if (cfg.zipf_s < 0.0) raise(Errc::invalid_config, "zipf_s must be >= 0");

  std::size_t num_categories = cfg.vocab_words / kWordsPerCategory;
  std::size_t span = cfg.max_labels - cfg.min_labels;
  double p = span == 0 ? 0.0
                       : (cfg.mean_labels - static_cast<double>(cfg.min_labels)) /
                             static_cast<double>(span);
  std::size_t id_width = std::max<std::size_t>(4, std::to_string(cfg.num_items - 1).size());

  Rng rng(derive_seed(cfg.seed, "universe"));
  Universe u;
  u.cfg = cfg;
  u.items.reserve(cfg.num_items);
  double weight_total = 0.0;
  for (std::size_t i = 0; i < cfg.num_items; ++i) {
    UniverseItem item;
    item.item_id = pad_id(i, id_width);
    std::size_t cat = static_cast<std::size_t>(rng.bounded(num_categories));

    item.text = item_word(i);
    for (std::size_t w : sample_distinct(rng, kWordsPerCategory, 3)) {
      item.text += ' ';
      item.text += category_word(cat * kWordsPerCategory + w);
    }

    std::size_t n_labels = cfg.min_labels + binomial(rng, span, p);
    for (std::size_t pool_index : sample_distinct(rng, kPoolSize, n_labels))
      item.true_labels.push_back(pool_label(cat, pool_index));

    item.weight = std::pow(static_cast<double>(i + 1), -cfg.zipf_s);
    weight_total += item.weight;
    u.items.push_back(std::move(item));
  }
  for (UniverseItem& item : u.items) item.weight /= weight_total;
  return u;
}

std::vector<InteractionRecord> simulate_annotations(const Universe& u,
                                                    std::size_t total_interactions,
                                                    std::uint64_t seed) {
  if (total_interactions < 1) raise(Errc::invalid_config, "need at least one interaction");
  if (u.items.empty()) raise(Errc::empty_dataset, "empty universe");
  std::vector<double> cumulative;
  cumulative.reserve(u.items.size());
  double acc = 0.0;
  for (const UniverseItem& item : u.items) {
    acc += item.weight;
    cumulative.push_back(acc);
  }

  Rng rng(derive_seed(seed, "annotations"));
  std::vector<InteractionRecord> records;
  records.reserve(total_interactions);
  for (std::size_t n = 0; n < total_interactions; ++n) {
    double r = rng.next_double() * acc;
    std::size_t idx = static_cast<std::size_t>(
        std::upper_bound(cumulative.begin(), cumulative.end(), r) - cumulative.begin());
    if (idx >= u.items.size()) idx = u.items.size() - 1;
    const UniverseItem& item = u.items[idx];
    const Keyphrase& label =
        item.true_labels[static_cast<std::size_t>(rng.bounded(item.true_labels.size()))];
    records.push_back({item.item_id, item.text, label.render(), 1});
  }
  return records;
}

double coverage(const Universe& u, const std::vector<Prediction>& preds, int k) {
  if (k < 1) raise(Errc::invalid_config, "k must be >= 1");
  if (u.items.empty()) raise(Errc::empty_dataset, "empty universe");
  std::unordered_map<std::string, const UniverseItem*> by_id;
  for (const UniverseItem& item : u.items) by_id.emplace(item.item_id, &item);
  std::unordered_map<std::string, const Prediction*> pred_by_id;
  for (const Prediction& pr : preds) {
    if (!by_id.count(pr.item_id))
      raise(Errc::unknown_item, "prediction for unknown item '" + pr.item_id + "'");
    pred_by_id.emplace(pr.item_id, &pr);
  }

  double total = 0.0;
  for (const UniverseItem& item : u.items) {
    auto it = pred_by_id.find(item.item_id);
    if (it == pred_by_id.end())
      raise(Errc::unknown_item, "no prediction for item '" + item.item_id + "'");
    std::vector<Keyphrase> top = dedup_keyphrases(it->second->kps);
    if (top.size() > static_cast<std::size_t>(k)) top.resize(static_cast<std::size_t>(k));
    KeyphraseSet truth(item.true_labels.begin(), item.true_labels.end());
    std::size_t hits = 0;
    for (const Keyphrase& kp : top) hits += truth.count(kp);
    total += static_cast<double>(hits) / static_cast<double>(truth.size());
  }
  return total / static_cast<double>(u.items.size());
}

void write_universe(const Universe& u, const std::filesystem::path& p) {
  using ojson = nlohmann::ordered_json;
  std::string out;
  for (const UniverseItem& item : u.items) {
    ojson j;
    j["id"] = item.item_id;
    j["text"] = item.text;
    ojson labels = ojson::array();
    for (const Keyphrase& kp : item.true_labels) labels.push_back(kp.render());
    j["labels"] = std::move(labels);
    j["weight"] = item.weight;
    out += j.dump();
    out += '\n';
  }
  io::atomic_write_file(p, out);
}

Universe read_universe(const std::filesystem::path& p) {
  using ojson = nlohmann::ordered_json;
  Universe u;
  std::string content = io::read_file(p);
  std::size_t pos = 0, line_no = 0;
  while (pos < content.size()) {
    std::size_t end = content.find('\n', pos);
    if (end == std::string::npos) end = content.size();
    std::string line = content.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ojson j = ojson::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object())
      raise(Errc::parse_error, "line " + std::to_string(line_no) + ": invalid JSON object");
    for (const char* field : {"id", "text", "labels", "weight"})
      if (!j.contains(field))
        raise(Errc::missing_field,
              "line " + std::to_string(line_no) + ": missing field '" + field + "'");
    UniverseItem item;
    item.item_id = j["id"].get<std::string>();
    item.text = j["text"].get<std::string>();
    for (const auto& lj : j["labels"]) item.true_labels.push_back(normalize_keyphrase(lj.get<std::string>()));
    item.weight = j["weight"].get<double>();
    if (item.true_labels.empty())
      raise(Errc::parse_error, "line " + std::to_string(line_no) + ": empty true label set");
    u.items.push_back(std::move(item));
  }
  return u;
}

}  // namespace oxmc
