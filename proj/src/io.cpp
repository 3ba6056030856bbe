#include "oxmc/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace oxmc::io {

namespace {

using ojson = nlohmann::ordered_json;

ojson parse_line(const std::string& line, std::size_t line_no) {
  ojson j = ojson::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    raise(Errc::parse_error, "line " + std::to_string(line_no) + ": invalid JSON object");
  return j;
}

template <typename Fn>
void for_each_line(const std::filesystem::path& p, Fn&& fn) {
  std::ifstream in(p);
  if (!in) raise(Errc::io_error, "cannot open " + p.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    fn(line, line_no);
  }
}

}  // namespace

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) raise(Errc::io_error, "cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

void atomic_write_file(const std::filesystem::path& p, const std::string& content) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::filesystem::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) raise(Errc::io_error, "cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) raise(Errc::io_error, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, p, ec);
  if (ec) raise(Errc::io_error, "rename " + tmp.string() + " -> " + p.string() + ": " + ec.message());
}

std::vector<InteractionRecord> read_interaction_log(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) raise(Errc::io_error, "cannot open " + p.string());
  return parse_interaction_log_strict(in);
}

void write_interaction_log(const std::vector<InteractionRecord>& recs, const std::filesystem::path& p) {
  std::string out;
  for (const InteractionRecord& r : recs) {
    ojson j;
    j["id"] = r.item_id;
    j["text"] = r.item_text;
    j["query"] = r.keyphrase;
    j["freq"] = r.frequency;
    out += j.dump();
    out += '\n';
  }
  atomic_write_file(p, out);
}

Dataset read_dataset(const std::filesystem::path& p) {
  Dataset d;
  d.provenance = p.filename().string();
  for_each_line(p, [&](const std::string& line, std::size_t line_no) {
    ojson j = parse_line(line, line_no);
    for (const char* field : {"id", "text", "labels"})
      if (!j.contains(field))
        raise(Errc::missing_field, "line " + std::to_string(line_no) + ": missing field '" + field + "'");
    Instance inst;
    inst.item_id = j["id"].get<std::string>();
    inst.text = j["text"].get<std::string>();
    inst.total_interactions = 0;
    for (const auto& lj : j["labels"]) {
      if (!lj.contains("kp") || !lj.contains("freq"))
        raise(Errc::missing_field, "line " + std::to_string(line_no) + ": label needs 'kp' and 'freq'");
      LabelEntry le;
      le.kp = normalize_keyphrase(lj["kp"].get<std::string>());
      le.frequency = lj["freq"].get<std::uint64_t>();
      inst.total_interactions += le.frequency;
      inst.labels.push_back(std::move(le));
    }
    d.instances.push_back(std::move(inst));
  });
  return d;
}

std::string dataset_to_jsonl(const Dataset& d) {
  std::string out;
  for (const Instance& inst : d.instances) {
    ojson j;
    j["id"] = inst.item_id;
    j["text"] = inst.text;
    ojson labels = ojson::array();
    for (const LabelEntry& le : inst.labels) {
      ojson lj;
      lj["kp"] = le.kp.render();
      lj["freq"] = le.frequency;
      labels.push_back(std::move(lj));
    }
    j["labels"] = std::move(labels);
    out += j.dump();
    out += '\n';
  }
  return out;
}

void write_dataset(const Dataset& d, const std::filesystem::path& p) {
  atomic_write_file(p, dataset_to_jsonl(d));
}

std::vector<Prediction> read_predictions(const std::filesystem::path& p) {
  std::vector<Prediction> preds;
  for_each_line(p, [&](const std::string& line, std::size_t line_no) {
    ojson j = parse_line(line, line_no);
    if (!j.contains("id") || !j.contains("kps"))
      raise(Errc::missing_field, "line " + std::to_string(line_no) + ": prediction needs 'id' and 'kps'");
    Prediction pr;
    pr.item_id = j["id"].get<std::string>();
    for (const auto& kj : j["kps"]) pr.kps.push_back(normalize_keyphrase(kj.get<std::string>()));
    preds.push_back(std::move(pr));
  });
  return preds;
}

std::string predictions_to_jsonl(const std::vector<Prediction>& preds) {
  std::string out;
  for (const Prediction& pr : preds) {
    ojson j;
    j["id"] = pr.item_id;
    ojson kps = ojson::array();
    for (const Keyphrase& kp : pr.kps) kps.push_back(kp.render());
    j["kps"] = std::move(kps);
    out += j.dump();
    out += '\n';
  }
  return out;
}

void write_predictions(const std::vector<Prediction>& preds, const std::filesystem::path& p) {
  atomic_write_file(p, predictions_to_jsonl(preds));
}

}  // namespace oxmc::io
