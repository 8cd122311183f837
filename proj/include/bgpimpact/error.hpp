#pragma once

#include <stdexcept>
#include <string>

namespace bgpimpact {

// Error categories map 1:1 onto the C API status codes and CLI exit codes:
// Argument -> 1 (usage), Parse/Data -> 2 (data), Internal -> 3.
enum class ErrorKind {
    Argument,
    Parse,
    Data,
    Internal,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

class ArgumentError : public Error {
  public:
    explicit ArgumentError(const std::string& what) : Error(ErrorKind::Argument, what) {}
};

// Malformed input; carries a 1-based line number when the source is line-oriented.
class ParseError : public Error {
  public:
    explicit ParseError(const std::string& what, long line = 0)
        : Error(ErrorKind::Parse, line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    long line() const noexcept { return line_; }

  private:
    long line_;
};

class DataError : public Error {
  public:
    explicit DataError(const std::string& what) : Error(ErrorKind::Data, what) {}
};

class InternalError : public Error {
  public:
    explicit InternalError(const std::string& what) : Error(ErrorKind::Internal, what) {}
};

}  // namespace bgpimpact
