#pragma once

#include <stdexcept>
#include <string>

namespace fasemcom {

enum class Errc {
  empty_input,
  no_candidates,
  format_error,
  empty_table,
  all_out_of_vocabulary,
  zero_norm,
  empty_boxes,
  dimension_mismatch,
  alpha_out_of_range,
  invalid_level,
  non_positive_budget,
  non_finite_value,
  grid_mismatch,
  shape_mismatch,
  io_error,
  config_error,
  invalid_argument,
};

const char* errc_name(Errc code);

/// Library-wide exception; carries a code so callers can branch on the
/// failure kind without string matching.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace fasemcom
