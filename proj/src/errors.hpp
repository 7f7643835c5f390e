#pragma once

#include <stdexcept>
#include <string>

namespace ptycho {

// Error categories; kept in sync with the ptycho_status codes of the C API.
enum class errc {
  invalid_argument = 1,
  dimension_mismatch,
  ill_conditioned,
  degenerate_system,
  incomplete_spectrum,
  not_phase_object,
  no_convergence,
  window_generation,
  nonphysical_measurement,
  inconsistent_system,
  ambiguity_resolution,
  rank_law_violation,
  io_failure,
  internal,
};

class Error : public std::runtime_error {
public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

} // namespace ptycho
