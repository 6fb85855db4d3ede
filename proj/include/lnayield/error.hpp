#pragma once

#include <stdexcept>
#include <string>

namespace lnayield {

/// Base for every error raised by the library. The message is prefixed with
/// the module that raised it, e.g. "budget: non-positive gain".
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(module + ": " + what), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

/// Bad input data: out-of-domain arguments, broken invariants, schema errors.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A computation could not be carried out (infeasible budget, I/O failure).
class RuntimeError : public Error {
 public:
  using Error::Error;
};

}  // namespace lnayield
