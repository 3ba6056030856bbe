#pragma once

#include <stdexcept>
#include <string>

namespace oxmc {

enum class Errc {
  empty_keyphrase,
  parse_error,
  missing_field,
  conflicting_text,
  empty_dataset,
  empty_input,
  zero_mean,
  all_zero,
  empty_ground_truth,
  length_mismatch,
  unknown_item,
  missing_prediction,
  no_labels,
  no_sequences,
  budget_exhausted,
  invalid_config,
  io_error,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace oxmc
