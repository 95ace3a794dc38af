#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace retrans {

/// Base class of every error thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value violates a domain invariant (bad token, mismatched lengths, J = 0 ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text. `line` is 1-based, 0 when not tied to a line.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : ValidationError(source + (line > 0 ? ":" + std::to_string(line) : std::string()) +
                        ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// File system or process failure.
class IoError : public Error {
 public:
  using Error::Error;
};

/// The external scorer broke the request/response contract or timed out.
class ProtocolError : public IoError {
 public:
  using IoError::IoError;
};

/// Rethrows the in-flight toolkit exception with `context: ` prepended,
/// keeping its category. Call only from inside a catch block.
[[noreturn]] inline void rethrow_with_context(const std::string& context) {
  try {
    throw;
  } catch (const ValidationError& e) {
    throw ValidationError(context + ": " + e.what());
  } catch (const ProtocolError& e) {
    throw ProtocolError(context + ": " + e.what());
  } catch (const IoError& e) {
    throw IoError(context + ": " + e.what());
  } catch (const Error& e) {
    throw Error(context + ": " + e.what());
  }
}

}  // namespace retrans
