#pragma once

#include <stdexcept>
#include <string>

namespace gofinsler {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input: wrong dimensions, broken Jacobi identity,
/// a subspace that is not a subalgebra, and so on.
class InputError : public Error {
 public:
  explicit InputError(const std::string& what, std::string path = {})
      : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// A precondition of a mathematical operation fails for the given data.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Floating-point iteration failed to converge or produced non-finite values.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace gofinsler
