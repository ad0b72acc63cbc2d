#pragma once

#include <stdexcept>
#include <string>

namespace vicsek {

// Failure categories surfaced by the library. The CLI maps these onto
// process exit codes (validation -> 2, resource caps -> 3, internal -> 4).
enum class errc {
  not_connected,
  has_cycle,
  self_loop,
  duplicate_edge,
  id_out_of_range,
  degree_exceeds_s,
  size_cap_exceeded,
  bad_parameter,
  degenerate_size,
  too_large_for_exact_solve,
  dense_cap_exceeded,
  ill_conditioned,
  no_three_real_roots,
  internal_inconsistency,
  same_source_target,
  io_error,
};

inline const char* errc_name(errc c) noexcept {
  switch (c) {
    case errc::not_connected: return "NotConnected";
    case errc::has_cycle: return "HasCycle";
    case errc::self_loop: return "SelfLoop";
    case errc::duplicate_edge: return "DuplicateEdge";
    case errc::id_out_of_range: return "IdOutOfRange";
    case errc::degree_exceeds_s: return "DegreeExceedsS";
    case errc::size_cap_exceeded: return "SizeCapExceeded";
    case errc::bad_parameter: return "BadParameter";
    case errc::degenerate_size: return "DegenerateSize";
    case errc::too_large_for_exact_solve: return "TooLargeForExactSolve";
    case errc::dense_cap_exceeded: return "DenseCapExceeded";
    case errc::ill_conditioned: return "IllConditioned";
    case errc::no_three_real_roots: return "NoThreeRealRoots";
    case errc::internal_inconsistency: return "InternalInconsistency";
    case errc::same_source_target: return "SameSourceTarget";
    case errc::io_error: return "IoError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, errc code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

}  // namespace vicsek
