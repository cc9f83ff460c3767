#include "fasemcom/errors.hpp"

namespace fasemcom {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::empty_input: return "EmptyInput";
    case Errc::no_candidates: return "NoCandidates";
    case Errc::format_error: return "FormatError";
    case Errc::empty_table: return "EmptyTable";
    case Errc::all_out_of_vocabulary: return "AllOutOfVocabulary";
    case Errc::zero_norm: return "ZeroNorm";
    case Errc::empty_boxes: return "EmptyBoxes";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::alpha_out_of_range: return "AlphaOutOfRange";
    case Errc::invalid_level: return "InvalidLevel";
    case Errc::non_positive_budget: return "NonPositiveBudget";
    case Errc::non_finite_value: return "NonFiniteValue";
    case Errc::grid_mismatch: return "GridMismatch";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::io_error: return "IoError";
    case Errc::config_error: return "ConfigError";
    case Errc::invalid_argument: return "InvalidArgument";
  }
  return "Error";
}

}  // namespace fasemcom
