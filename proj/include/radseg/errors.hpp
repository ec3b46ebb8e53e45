#pragma once

#include <stdexcept>
#include <string>

namespace radseg {

// Coarse failure class, used by the CLI to pick an exit code.
enum class ErrorKind {
  config,      // bad parameter document or parameter value
  data,        // unreadable, malformed or inconsistent input data
  processing,  // the algorithm could not produce a result from valid input
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  explicit Error(const std::string& what) : Error(ErrorKind::processing, what) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

class FormatError : public Error {
public:
  explicit FormatError(const std::string& what) : Error(ErrorKind::data, what) {}
};

class SizeError : public Error {
public:
  explicit SizeError(const std::string& what) : Error(ErrorKind::data, what) {}
};

class DataError : public Error {
public:
  explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

class IoError : public Error {
public:
  explicit IoError(const std::string& what) : Error(ErrorKind::data, what) {}
};

class EmptyInputError : public Error {
public:
  explicit EmptyInputError(const std::string& what) : Error(ErrorKind::processing, what) {}
};

class NoPeaksError : public Error {
public:
  explicit NoPeaksError(const std::string& what) : Error(ErrorKind::processing, what) {}
};

class VerticalLineError : public Error {
public:
  explicit VerticalLineError(const std::string& what) : Error(ErrorKind::processing, what) {}
};

class ParallelLinesError : public Error {
public:
  explicit ParallelLinesError(const std::string& what) : Error(ErrorKind::processing, what) {}
};

class ConsistencyError : public Error {
public:
  explicit ConsistencyError(const std::string& what) : Error(ErrorKind::processing, what) {}
};

class NoActivityError : public Error {
public:
  explicit NoActivityError(const std::string& what) : Error(ErrorKind::processing, what) {}
};

// Wraps a failure with the pipeline stage it occurred in; keeps the original kind
// so exit-code mapping still sees the underlying failure class.
class StageError : public Error {
public:
  StageError(const std::string& stage, const Error& cause)
      : Error(cause.kind(), stage + ": " + cause.what()), stage_(stage) {}
  const std::string& stage() const { return stage_; }

private:
  std::string stage_;
};

}  // namespace radseg
