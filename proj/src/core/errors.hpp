#pragma once

#include <stdexcept>
#include <string>

namespace natle {

// Mirrors natle_status in the C header; the C API translates one to the other.
enum class ErrorCode {
  invalid_argument = 1,
  io_unreadable,
  io_format,
  io_dimensions,
  io_write,
  dimension_mismatch,
  not_converged,
  internal,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

// Raised by solve_spd when the residual contract cannot be met.
class NotConvergedError : public Error {
public:
  NotConvergedError(const std::string& what, double residual, int iterations)
      : Error(ErrorCode::not_converged, what), residual_(residual),
        iterations_(iterations) {}

  double relative_residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

private:
  double residual_;
  int iterations_;
};

}  // namespace natle
