#pragma once

#include <stdexcept>
#include <string>

#include "rectri/common.hpp"

namespace rectri {

// Root of the library's failure hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-conforming matrix dimensions.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Requested subview rectangle escapes its parent.
class BoundsError : public Error {
 public:
  using Error::Error;
};

// Output view overlaps a read-only input view.
class AliasError : public Error {
 public:
  using Error::Error;
};

// split_half called with n < 2.
class SplitError : public Error {
 public:
  using Error::Error;
};

// Base kernel invoked on a tile larger than its configured limit.
class TileLimitError : public Error {
 public:
  using Error::Error;
};

// Invalid flags, threshold, backend, or bench configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Exactly-zero pivot encountered by a NonUnit triangular solve. The index is
// the row of the diagonal entry, relative to the A argument of the call that
// surfaced the error (drivers translate tile-local indices to global ones).
class SingularityError : public Error {
 public:
  explicit SingularityError(index_t index)
      : Error("singular triangular matrix: zero diagonal at row " +
              std::to_string(index)),
        index_(index) {}

  index_t index() const noexcept { return index_; }

 private:
  index_t index_;
};

// Benchmark result failed its residual gate.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Ratio report inputs do not share the same key set.
class JoinError : public Error {
 public:
  using Error::Error;
};

// Unreadable or unwritable file path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace rectri
