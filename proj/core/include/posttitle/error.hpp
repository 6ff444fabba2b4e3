#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace posttitle {

// Base class for every error raised by the library. Commands map the
// concrete type onto a process exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArg : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class UnknownLanguage : public Error {
 public:
  explicit UnknownLanguage(std::string tag);
  const std::string& tag() const noexcept { return tag_; }

 private:
  std::string tag_;
};

// Raised while reading line-oriented input. Line numbers are 1-based; 0
// means the error is not tied to a single line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class SchemaError : public Error {
 public:
  SchemaError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class DuplicateId : public Error {
 public:
  DuplicateId(std::size_t line, std::string id);
  std::size_t line() const noexcept { return line_; }
  const std::string& id() const noexcept { return id_; }

 private:
  std::size_t line_;
  std::string id_;
};

class GeneratorUnavailable : public Error {
 public:
  using Error::Error;
};

class ProtocolError : public Error {
 public:
  using Error::Error;
};

class Timeout : public Error {
 public:
  using Error::Error;
};

class MissingPrediction : public Error {
 public:
  MissingPrediction(std::vector<std::string> missing,
                    std::vector<std::string> unexpected);
  const std::vector<std::string>& missing() const noexcept { return missing_; }
  const std::vector<std::string>& unexpected() const noexcept {
    return unexpected_;
  }

 private:
  std::vector<std::string> missing_;
  std::vector<std::string> unexpected_;
};

}  // namespace posttitle
