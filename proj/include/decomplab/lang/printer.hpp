#ifndef DECOMPLAB_LANG_PRINTER_HPP
#define DECOMPLAB_LANG_PRINTER_HPP

#include "decomplab/lang/ast.hpp"

#include <span>
#include <string>

namespace decomplab {

/// Canonical source text: 4-space indentation, one statement per line and a
/// single blank line between functions.
std::string pretty_print(const Program &p);

std::string pretty_print(const Expr &e);

/// Prints a statement sequence at the given indentation depth.
std::string pretty_print(std::span<const Stmt> stmts, int depth = 0);

/// Shortest text that reads back as the same double.
std::string float_literal_text(double v);

} // namespace decomplab

#endif // DECOMPLAB_LANG_PRINTER_HPP
