#include "oxmc/errors.hpp"

namespace oxmc {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::empty_keyphrase: return "EmptyKeyphrase";
    case Errc::parse_error: return "ParseError";
    case Errc::missing_field: return "MissingField";
    case Errc::conflicting_text: return "ConflictingText";
    case Errc::empty_dataset: return "EmptyDataset";
    case Errc::empty_input: return "EmptyInput";
    case Errc::zero_mean: return "ZeroMean";
    case Errc::all_zero: return "AllZero";
    case Errc::empty_ground_truth: return "EmptyGroundTruth";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::unknown_item: return "UnknownItem";
    case Errc::missing_prediction: return "MissingPrediction";
    case Errc::no_labels: return "NoLabels";
    case Errc::no_sequences: return "NoSequences";
    case Errc::budget_exhausted: return "BudgetExhausted";
    case Errc::invalid_config: return "InvalidConfig";
    case Errc::io_error: return "IoError";
  }
  return "UnknownError";
}

}  // namespace oxmc
