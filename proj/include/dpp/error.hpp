#pragma once

#include <stdexcept>
#include <string>

namespace dpp {

/// Broad failure classes. The CLI maps these onto process exit codes.
enum class ErrorKind {
  InvalidInput,      // bad arguments or configuration
  NotFound,          // unknown identifier (benchmark id, ...)
  NoStableRegion,    // nothing stabilizing to work with
  NonConvexRegion,   // the centroid of a stable set is itself unstable
  Numeric,           // numerical failure or violated numerical precondition
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error invalid_input(const std::string& what) { return {ErrorKind::InvalidInput, what}; }
inline Error not_found(const std::string& what) { return {ErrorKind::NotFound, what}; }
inline Error no_stable_region(const std::string& what) { return {ErrorKind::NoStableRegion, what}; }
inline Error non_convex_region(const std::string& what) { return {ErrorKind::NonConvexRegion, what}; }
inline Error numeric_failure(const std::string& what) { return {ErrorKind::Numeric, what}; }

}  // namespace dpp
