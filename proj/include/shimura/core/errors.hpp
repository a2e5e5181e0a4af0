#pragma once

#include <stdexcept>
#include <string>

namespace shimura {

/// Base class for every error raised by the library. The CLI maps the
/// category onto its exit code.
class Error : public std::runtime_error {
public:
  enum class Kind {
    Shape,        // dimension / modulus mismatch
    Domain,       // input outside the domain of the operation
    Degeneracy,   // singular matrix where an invertible one was required
    Rank,         // rank-deficient input
    Resource,     // enumeration budget exceeded
    Recovery,     // rational-function recovery failed within the bounds
    Internal,     // a result that would falsify a theorem; a bug if seen
    Input         // malformed document or literal
  };

  Error(Kind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

inline Error shape_error(const std::string &w) { return {Error::Kind::Shape, w}; }
inline Error domain_error(const std::string &w) { return {Error::Kind::Domain, w}; }
inline Error degeneracy_error(const std::string &w) {
  return {Error::Kind::Degeneracy, w};
}
inline Error rank_error(const std::string &w) { return {Error::Kind::Rank, w}; }
inline Error resource_error(const std::string &w) {
  return {Error::Kind::Resource, w};
}
inline Error recovery_error(const std::string &w) {
  return {Error::Kind::Recovery, w};
}
inline Error internal_error(const std::string &w) {
  return {Error::Kind::Internal, w};
}
inline Error input_error(const std::string &w) { return {Error::Kind::Input, w}; }

/// Execution policy for the enumeration kernels. `Serial` is the reference
/// implementation the parallel one is tested against.
enum class Exec { Serial, Parallel };

} // namespace shimura
