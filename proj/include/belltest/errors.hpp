#ifndef BELLTEST_ERRORS_HPP
#define BELLTEST_ERRORS_HPP

#include <stdexcept>

namespace belltest {

// Malformed document syntax. The message carries line/column of the failure.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Structurally valid document that does not match the schema (missing,
// unknown or mistyped field). The message names the field.
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A record or configuration violates a domain invariant. The message names
// the offending record or field.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The requested computation has no defined result for these inputs
// (all-zero probabilities in a fit, non-positive CH denominator, ...).
struct DegenerateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace belltest

#endif  // BELLTEST_ERRORS_HPP
