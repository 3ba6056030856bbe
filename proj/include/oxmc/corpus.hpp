#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "oxmc/errors.hpp"
#include "oxmc/keyphrase.hpp"

namespace oxmc {

// One raw log line: a user typed `keyphrase` against item `item_id` `frequency` times.
struct InteractionRecord {
  std::string item_id;
  std::string item_text;
  std::string keyphrase;  // raw, not yet normalized
  std::uint64_t frequency = 1;
};

struct LabelEntry {
  Keyphrase kp;
  std::uint64_t frequency = 0;

  auto operator<=>(const LabelEntry&) const = default;
};

// Curated item: deduplicated labels plus the interaction volume that produced them.
// total_interactions bounds the number of unique labels for curated data; augmented
// instances may carry injected zero-frequency labels that escape that bound.
struct Instance {
  std::string item_id;
  std::string text;
  std::vector<LabelEntry> labels;
  std::uint64_t total_interactions = 0;

  std::size_t unique_label_count() const { return labels.size(); }
  bool operator==(const Instance&) const = default;
};

struct Dataset {
  std::vector<Instance> instances;
  std::string provenance;

  std::size_t size() const { return instances.size(); }
  bool empty() const { return instances.empty(); }
};

// Ordered model output for one item. kps keep generation order and may repeat.
struct Prediction {
  std::string item_id;
  std::vector<Keyphrase> kps;
};

struct ParseIssue {
  std::size_t line_no = 0;  // 1-based
  Errc code = Errc::parse_error;
  std::string message;
};

struct ParseResult {
  std::vector<InteractionRecord> records;
  std::vector<ParseIssue> issues;
};

// Reads JSON-Lines records {"id","text","query","freq"}. Blank lines are skipped.
// Malformed lines land in issues with their 1-based line number; parsing continues.
ParseResult parse_interaction_log(std::istream& in);

// Same, but any issue throws (ParseError / MissingField with the line number).
std::vector<InteractionRecord> parse_interaction_log_strict(std::istream& in);

// Groups records by item_id, normalizes and deduplicates keyphrases (summing
// frequencies), then merges items that share the same text. Labels are ordered
// by descending frequency, ties lexicographic. Throws ConflictingText when one
// item_id carries two different texts.
Dataset curate(const std::vector<InteractionRecord>& records);

// Expands a curated instance back into one record per label occurrence class
// (one record carrying the summed frequency). Used by idempotence checks.
std::vector<InteractionRecord> expand(const Dataset& d);

}  // namespace oxmc
