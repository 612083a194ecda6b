#pragma once

#include <stdexcept>
#include <string>

namespace structpca {

enum class Errc {
  invalid_argument,
  non_square,
  not_symmetric,
  failed_to_converge,
  empty_null_space,
  rank_deficient,
  rank_deficient_base,
  support_out_of_range,
  structure_infeasible,
  too_few_samples,
  degenerate_covariance,
  degenerate_signal,
  known_rows_rank_deficient,
  dimension_mismatch,
  shape_mismatch,
  rank_deficient_estimate,
  length_mismatch,
  unknown_case,
  io_error,
  parse_error,
};

/// Stable identifier, e.g. "NotSymmetric". Used in CLI messages and the C API.
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

}  // namespace structpca
