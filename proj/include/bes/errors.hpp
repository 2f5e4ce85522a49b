#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bes {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Lexical/grammatical failure; byte offsets into the source text.
struct ParseError : Error {
  std::size_t begin = 0, end = 0;
  ParseError(const std::string& msg, std::size_t b, std::size_t e)
      : Error(msg + " at " + std::to_string(b) + ".." + std::to_string(e)),
        begin(b), end(e) {}
};

// A predicate symbol used with two different arities. Parsers fill in the
// byte span of the offending atom; other call sites leave it zeroed.
struct ArityMismatch : Error {
  std::size_t begin = 0, end = 0;
  using Error::Error;
  ArityMismatch(const std::string& msg, std::size_t b, std::size_t e)
      : Error(msg + " at " + std::to_string(b) + ".." + std::to_string(e)),
        begin(b), end(e) {}
};

// Substituting a variable would place it under a binder of the same name.
struct CaptureError : Error {
  using Error::Error;
};

// An eigen symbol required to be fresh is not.
struct FreshnessError : Error {
  using Error::Error;
};

// A proof transformation is blocked (never silently repaired).
struct TransformError : Error {
  using Error::Error;
};

// A formula falls outside the fragment a flattening table is defined on.
struct FragmentError : Error {
  using Error::Error;
};

// A proof step cites a step index that does not exist (yet).
struct DanglingReference : Error {
  using Error::Error;
};

// A derivation trace cites a rule the base does not contain.
struct UnknownRule : Error {
  using Error::Error;
};

// A base handed to the support evaluator is not an admissible subset of U.
struct InadmissibleBase : Error {
  using Error::Error;
};

// The demo runner was asked for a scenario it does not ship.
struct UnknownDemo : Error {
  using Error::Error;
};

}  // namespace bes
