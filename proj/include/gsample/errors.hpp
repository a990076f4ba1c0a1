#pragma once

#include <stdexcept>
#include <string>

namespace gsample {

// Base for all recoverable library failures. Precondition violations on
// arguments throw std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GraphError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line)
      : Error(msg + " at line " + std::to_string(line)), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class EigenSolverError : public Error {
 public:
  using Error::Error;
};

class SingularInformationMatrix : public Error {
 public:
  using Error::Error;
};

class RankDeficientSampling : public Error {
 public:
  using Error::Error;
};

class FallbackExhausted : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace gsample
