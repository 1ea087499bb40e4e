#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace handoff {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value violates the domain of a type or operation.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

// An argument lies outside the domain where a formula is defined
// (e.g. a direction outside the crossing cone).
class OutOfDomain : public Error {
 public:
  using Error::Error;
};

// Root finding was asked for a value the monotone map cannot reach.
class NotBracketed : public Error {
 public:
  using Error::Error;
};

// The requested handoff type has no configured delay.
class UnsupportedType : public Error {
 public:
  using Error::Error;
};

class UnknownBaseStation : public Error {
 public:
  explicit UnknownBaseStation(std::string id)
      : Error("unknown base station '" + id + "'"), id_(std::move(id)) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

// Malformed configuration text.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed configuration with an invalid value; carries the dotted key path.
class ValidationError : public Error {
 public:
  ValidationError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace handoff
