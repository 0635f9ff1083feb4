#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace lmw {

/// Byte range [begin, end) into the input text of a parser.
struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Lexical or syntactic error; carries the offending span and what was expected.
struct ParseError : Error {
  ParseError(std::string msg, SourceSpan s, std::vector<std::string> exp = {})
      : Error(std::move(msg)), span(s), expected(std::move(exp)) {}
  SourceSpan span;
  std::vector<std::string> expected;
};

struct CaptureError : Error {
  using Error::Error;
};

struct UnboundVariable : Error {
  using Error::Error;
};

struct UnknownSymbol : Error {
  using Error::Error;
};

struct UnknownWorld : Error {
  using Error::Error;
};

struct UnknownElement : Error {
  using Error::Error;
};

struct NotTotal : Error {
  using Error::Error;
};

struct NegationInPositiveLanguage : Error {
  using Error::Error;
};

struct DiamondInBoxOnly : Error {
  using Error::Error;
};

struct WrongSignature : Error {
  using Error::Error;
};

struct NotInImage : Error {
  using Error::Error;
};

struct MissingSymbol : Error {
  using Error::Error;
};

struct SizeCap : Error {
  using Error::Error;
};

struct TheoryNotSatisfied : Error {
  using Error::Error;
};

/// Structural error in a model document; names the offending field.
struct SchemaError : Error {
  SchemaError(std::string msg, std::string fld)
      : Error(msg + " (field: " + fld + ")"), field(std::move(fld)) {}
  std::string field;
};

}  // namespace lmw
