#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace weylspec {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed symbol or field text. `position` is a 0-based byte offset.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& what)
      : Error("parse error at " + std::to_string(position) + ": " + what), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Well-formed expression that falls outside the admissible symbol class.
class StructureError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class UnboundParameterError : public Error {
 public:
  explicit UnboundParameterError(const std::string& name)
      : Error("unbound parameter '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// A matrix window would exceed the configured dimension cap.
class WindowCapError : public Error {
 public:
  using Error::Error;
};

class NonFiniteError : public Error {
 public:
  using Error::Error;
};

/// An operation needed a nonempty spectral set and got an empty one.
class EmptySpectrumError : public Error {
 public:
  using Error::Error;
};

/// Every eigenvector of every fiber was boundary-localized.
class AllBoundaryStatesError : public EmptySpectrumError {
 public:
  using EmptySpectrumError::EmptySpectrumError;
};

/// Gap tracking found spectrum on only one side of the midpoint.
class OneSidedSpectrumError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment configuration; `field` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : Error(field + ": " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace weylspec
