#pragma once

#include <stdexcept>
#include <string>

namespace genlim {

// Typed failure conditions. Oracle and algebra contracts raise these instead
// of returning sentinel values; the CLI maps the kinds onto exit codes.
enum class ErrorKind {
  UnknownBasePair,    // set algebra has no closed-form relation for the base pair
  IndexOutOfRange,    // language index outside the collection's index range
  CapabilityMissing,  // oracle suite lacks the requested capability
  ContractViolation,  // oracle called outside its defining precondition
  NoTellTale,         // the language provably has no tell-tale of that kind
  EmptyVersionSpace,  // no language is consistent with the sample set
  NotAViolationPoint, // no declared witness rule for (collection, star, kind)
  EmptySupport,       // sampling from an empty support
  UndefinedSupport,   // introspection on an undefined descriptor
  WrongCollection,    // generator bound to a specific collection got another
  Config,             // malformed or contradictory run configuration
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

const char* to_string(ErrorKind kind);

} // namespace genlim
