#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace quatlat {

enum class ErrorKind {
  DivisionByZero,
  FieldMismatch,
  NotPresent,
  NoEmbedding,
  PrecisionExhausted,
  AlgebraMismatch,
  ZeroDivisor,
  ZeroParameter,
  NotPositiveDefinite,
  RankDeficient,
  NotIntegralGenerator,
  NotFullRank,
  NoClosure,
  NotCompatible,
  UnsupportedAlgebra,
  NotIdeal,
  FactoringIncomplete,
  NotDefinite,
  NotEmbeddable,
  SearchExhausted,
  SyntaxError,
  UnknownSymbol,
  SchemaError,
  Internal,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Parser errors carry the byte span [begin, end) of the offending input.
class ParseError : public Error {
 public:
  ParseError(ErrorKind kind, const std::string& message, std::size_t begin, std::size_t end)
      : Error(kind, message + " at " + std::to_string(begin) + ".." + std::to_string(end)),
        begin_(begin),
        end_(end) {}

  std::size_t begin() const noexcept { return begin_; }
  std::size_t end() const noexcept { return end_; }

 private:
  std::size_t begin_;
  std::size_t end_;
};

}  // namespace quatlat
