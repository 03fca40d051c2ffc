#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace genproj {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed polynomial expression. `position` is a 0-based character offset.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)),
        position_(position), message_(what) {}

  std::size_t position() const noexcept { return position_; }
  const std::string& message() const noexcept { return message_; }

private:
  std::size_t position_;
  std::string message_;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
public:
  using Error::Error;
};

class SingularMatrix : public Error {
public:
  using Error::Error;
};

class DegenerateInput : public Error {
public:
  using Error::Error;
};

class RankDeficientJacobian : public Error {
public:
  using Error::Error;
};

class NewtonDiverged : public Error {
public:
  using Error::Error;
};

class NotNormalized : public Error {
public:
  using Error::Error;
};

class NonTransverse : public Error {
public:
  NonTransverse(const std::string& what, int intersection_dim)
      : Error(what), dim_(intersection_dim) {}
  /// Dimension of the linear intersection that was found.
  int intersection_dim() const noexcept { return dim_; }

private:
  int dim_;
};

class SingularTangentJacobian : public Error {
public:
  using Error::Error;
};

class CenterHit : public Error {
public:
  using Error::Error;
};

class InvalidCenter : public Error {
public:
  using Error::Error;
};

class InsufficientPoints : public Error {
public:
  using Error::Error;
};

class NoConsensus : public Error {
public:
  using Error::Error;
};

class HypothesisNotMet : public Error {
public:
  using Error::Error;
};

}  // namespace genproj
