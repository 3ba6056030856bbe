#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "oxmc/corpus.hpp"

namespace oxmc {
namespace io {

std::string read_file(const std::filesystem::path& p);

// Writes to p + ".tmp" then renames. Partial output never lands at p.
void atomic_write_file(const std::filesystem::path& p, const std::string& content);

// Raw interaction log {"id","text","query","freq"}; throws on any bad line.
std::vector<InteractionRecord> read_interaction_log(const std::filesystem::path& p);
void write_interaction_log(const std::vector<InteractionRecord>& recs, const std::filesystem::path& p);

// Curated dataset lines {"id","text","labels":[{"kp","freq"}]}.
Dataset read_dataset(const std::filesystem::path& p);
std::string dataset_to_jsonl(const Dataset& d);
void write_dataset(const Dataset& d, const std::filesystem::path& p);

// Prediction lines {"id","kps":[string]}.
std::vector<Prediction> read_predictions(const std::filesystem::path& p);
std::string predictions_to_jsonl(const std::vector<Prediction>& preds);
void write_predictions(const std::vector<Prediction>& preds, const std::filesystem::path& p);

}  // namespace io
}  // namespace oxmc
