#ifndef DECOMPLAB_LANG_PARSER_HPP
#define DECOMPLAB_LANG_PARSER_HPP

#include "decomplab/lang/ast.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace decomplab {

class ParseError : public std::runtime_error {
public:
  enum class Kind {
    Syntax,
    DuplicateFunction,
    MissingMain,
    RecursionNotSupported,
    UnknownFunction,
    DuplicateParameter,
    MissingReturn,
    InvalidReturn,
  };

  ParseError(Kind kind, SourcePos pos, std::string message,
             std::vector<std::string> expected = {});

  Kind kind() const noexcept { return kind_; }
  SourcePos pos() const noexcept { return pos_; }
  /// Token spellings that would have been accepted (Syntax errors only).
  const std::vector<std::string> &expected() const noexcept {
    return expected_;
  }

private:
  Kind kind_;
  SourcePos pos_;
  std::vector<std::string> expected_;
};

std::string_view to_string(ParseError::Kind kind) noexcept;

/// Parses MiniProc source, checks the program-level invariants and numbers
/// statements in pre-order.
Program parse(std::string_view source);

/// Checks the invariants parse() enforces on an already-built Program:
/// unique function and parameter names, a main function, resolved and
/// non-recursive calls, and well-formed returns. Throws ParseError.
void check_program(const Program &p);

} // namespace decomplab

#endif // DECOMPLAB_LANG_PARSER_HPP
