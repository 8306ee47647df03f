#pragma once

#include <stdexcept>
#include <string>

namespace fpdiff {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid generator, input, registry or campaign configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class DialectError : public Error {
 public:
  using Error::Error;
};

/// CUDA construct that the built-in translator does not know how to rewrite.
class UnsupportedConstructError : public Error {
 public:
  explicit UnsupportedConstructError(std::string construct)
      : Error("unsupported CUDA construct: " + construct),
        construct_(std::move(construct)) {}
  const std::string& construct() const { return construct_; }

 private:
  std::string construct_;
};

class UnmatchedExtensionError : public Error {
 public:
  explicit UnmatchedExtensionError(std::string extension)
      : Error("no compiler registered for extension '" + extension + "'"),
        extension_(std::move(extension)) {}
  const std::string& extension() const { return extension_; }

 private:
  std::string extension_;
};

/// Compilation failed; `diagnostics()` holds the compiler's combined output.
class CompileError : public Error {
 public:
  CompileError(const std::string& what, std::string diagnostics)
      : Error(what), diagnostics_(std::move(diagnostics)) {}
  const std::string& diagnostics() const { return diagnostics_; }

 private:
  std::string diagnostics_;
};

class ParseError : public Error {
 public:
  explicit ParseError(std::string raw)
      : Error("cannot parse program output: '" + raw + "'"), raw_(std::move(raw)) {}
  const std::string& raw() const { return raw_; }

 private:
  std::string raw_;
};

/// Raised by the reference interpreter on malformed programs.
class EvalError : public Error {
 public:
  using Error::Error;
};

class VersionError : public Error {
 public:
  using Error::Error;
};

}  // namespace fpdiff
