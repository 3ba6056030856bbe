#include "oxmc/corpus.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <string>
#include <unordered_map>

#include <json.hpp>

namespace oxmc {

namespace {

using nlohmann::json;

// Pulls one record out of a parsed line. Throws Error with the reason; the
// caller attaches the line number.
InteractionRecord record_from_json(const json& j) {
  if (!j.is_object()) raise(Errc::parse_error, "line is not a JSON object");
  InteractionRecord rec;
  for (const char* field : {"id", "text", "query"}) {
    auto it = j.find(field);
    if (it == j.end()) raise(Errc::missing_field, std::string("missing field '") + field + "'");
    if (!it->is_string()) raise(Errc::parse_error, std::string("field '") + field + "' is not a string");
  }
  auto fit = j.find("freq");
  if (fit == j.end()) raise(Errc::missing_field, "missing field 'freq'");
  if (!fit->is_number_integer() || fit->get<std::int64_t>() < 1)
    raise(Errc::parse_error, "field 'freq' must be an integer >= 1");
  rec.item_id = j["id"].get<std::string>();
  rec.item_text = j["text"].get<std::string>();
  rec.keyphrase = j["query"].get<std::string>();
  rec.frequency = static_cast<std::uint64_t>(fit->get<std::int64_t>());
  return rec;
}

}  // namespace

ParseResult parse_interaction_log(std::istream& in) {
  ParseResult out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      out.issues.push_back({line_no, Errc::parse_error, "invalid JSON"});
      continue;
    }
    try {
      out.records.push_back(record_from_json(j));
    } catch (const Error& e) {
      out.issues.push_back({line_no, e.code(), e.what()});
    }
  }
  return out;
}

std::vector<InteractionRecord> parse_interaction_log_strict(std::istream& in) {
  ParseResult r = parse_interaction_log(in);
  if (!r.issues.empty()) {
    const ParseIssue& first = r.issues.front();
    raise(first.code, "line " + std::to_string(first.line_no) + ": " + first.message);
  }
  return std::move(r.records);
}

Dataset curate(const std::vector<InteractionRecord>& records) {
  // Group by item_id, preserving first-seen order.
  struct ItemAcc {
    std::string text;
    std::map<Keyphrase, std::uint64_t> freq;  // ordered: stable tie handling below
    std::uint64_t total = 0;
  };
  std::vector<std::string> id_order;
  std::unordered_map<std::string, ItemAcc> by_id;
  for (const InteractionRecord& rec : records) {
    auto [it, inserted] = by_id.try_emplace(rec.item_id);
    if (inserted) {
      id_order.push_back(rec.item_id);
      it->second.text = rec.item_text;
    } else if (it->second.text != rec.item_text) {
      raise(Errc::conflicting_text,
            "item '" + rec.item_id + "' has conflicting texts: '" + it->second.text + "' vs '" +
                rec.item_text + "'");
    }
    Keyphrase kp = normalize_keyphrase(rec.keyphrase);
    it->second.freq[std::move(kp)] += rec.frequency;
    it->second.total += rec.frequency;
  }

  // Merge items sharing the same text; the merged item keeps the first item_id.
  std::vector<Instance> items;
  std::unordered_map<std::string, std::size_t> by_text;
  std::vector<std::map<Keyphrase, std::uint64_t>> merged_freq;
  for (const std::string& id : id_order) {
    ItemAcc& acc = by_id[id];
    auto [it, inserted] = by_text.try_emplace(acc.text, items.size());
    if (inserted) {
      items.push_back(Instance{id, acc.text, {}, acc.total});
      merged_freq.push_back(std::move(acc.freq));
    } else {
      Instance& dst = items[it->second];
      dst.total_interactions += acc.total;
      for (auto& [kp, f] : acc.freq) merged_freq[it->second][kp] += f;
    }
  }

  for (std::size_t i = 0; i < items.size(); ++i) {
    std::vector<LabelEntry> labels;
    labels.reserve(merged_freq[i].size());
    for (auto& [kp, f] : merged_freq[i]) labels.push_back({kp, f});
    // Descending frequency; the map already yields lexicographic order within a
    // frequency class, and stable_sort keeps it.
    std::stable_sort(labels.begin(), labels.end(),
                     [](const LabelEntry& a, const LabelEntry& b) { return a.frequency > b.frequency; });
    items[i].labels = std::move(labels);
  }

  return Dataset{std::move(items), "curated"};
}

std::vector<InteractionRecord> expand(const Dataset& d) {
  std::vector<InteractionRecord> out;
  for (const Instance& inst : d.instances)
    for (const LabelEntry& le : inst.labels)
      out.push_back({inst.item_id, inst.text, le.kp.render(), le.frequency});
  return out;
}

}  // namespace oxmc
