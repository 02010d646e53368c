//===--- ast.hpp - MiniProc abstract syntax tree ----------------*- C++ -*-===//
//
// Node types for the MiniProc teaching language. Nodes are plain values:
// copying a Program deep-copies the tree, and nothing is shared between
// copies.
//
//===----------------------------------------------------------------------===//

#ifndef DECOMPLAB_LANG_AST_HPP
#define DECOMPLAB_LANG_AST_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace decomplab {

/// Pre-order statement number, unique within a Program.
enum class StmtId : std::int32_t {};

/// Pseudo statement that defines the parameters of main.
inline constexpr StmtId kEntryDef{-1};

constexpr std::int32_t to_int(StmtId id) noexcept {
  return static_cast<std::int32_t>(id);
}

struct SourcePos {
  int line = 1;
  int column = 1;

  friend bool operator==(const SourcePos &, const SourcePos &) = default;
};

enum class Type { Int, Float, Bool, String, List, Void };

std::string_view type_name(Type t) noexcept;

enum class BinaryOp { Add, Sub, Mul, Div, Mod, Eq, Ne, Lt, Le, Gt, Ge, And, Or };
enum class UnaryOp { Neg, Not };

std::string_view op_spelling(BinaryOp op) noexcept;
std::string_view op_spelling(UnaryOp op) noexcept;
bool is_comparison(BinaryOp op) noexcept;

struct Expr {
  enum class Kind {
    IntLit,
    FloatLit,
    BoolLit,
    StrLit,
    ListLit,
    Var,
    Binary,
    Unary,
    Call,
    Index,
    Len,
    /// Placeholder left behind by literal abstraction.
    Hole,
  };

  Kind kind = Kind::IntLit;
  std::int64_t int_value = 0;
  double float_value = 0.0;
  bool bool_value = false;
  /// Variable name, call target, or string literal contents.
  std::string name;
  BinaryOp binary_op = BinaryOp::Add;
  UnaryOp unary_op = UnaryOp::Neg;
  /// Binary: {lhs, rhs}; Unary/Len: {operand}; Index: {base, index};
  /// Call and ListLit: arguments/elements in order.
  std::vector<Expr> operands;
  SourcePos pos;

  static Expr int_lit(std::int64_t v, SourcePos pos = {});
  static Expr float_lit(double v, SourcePos pos = {});
  static Expr bool_lit(bool v, SourcePos pos = {});
  static Expr str_lit(std::string v, SourcePos pos = {});
  static Expr list_lit(std::vector<Expr> elems, SourcePos pos = {});
  static Expr var(std::string name, SourcePos pos = {});
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs, SourcePos pos = {});
  static Expr unary(UnaryOp op, Expr operand, SourcePos pos = {});
  static Expr call(std::string callee, std::vector<Expr> args,
                   SourcePos pos = {});
  static Expr index(Expr base, Expr idx, SourcePos pos = {});
  static Expr len(Expr arg, SourcePos pos = {});
  static Expr hole(SourcePos pos = {});

  bool is_literal() const noexcept {
    return kind == Kind::IntLit || kind == Kind::FloatLit ||
           kind == Kind::BoolLit || kind == Kind::StrLit;
  }
};

struct Stmt {
  enum class Kind { Assign, IndexAssign, Print, If, While, ForRange, Return, ExprStmt };

  Kind kind = Kind::Assign;
  StmtId id{0};
  SourcePos pos;
  /// Assign/IndexAssign target or the ForRange loop variable.
  std::string target;
  /// Assign: {value}; IndexAssign: {index, value}; Print: args;
  /// If/While: {cond}; ForRange: {lo, hi}; Return: {} or {value};
  /// ExprStmt: {call}.
  std::vector<Expr> exprs;
  /// If-then, While or ForRange body.
  std::vector<Stmt> body;
  /// If-else branch.
  std::vector<Stmt> orelse;

  static Stmt assign(std::string target, Expr value, SourcePos pos = {});
  static Stmt index_assign(std::string target, Expr idx, Expr value,
                           SourcePos pos = {});
  static Stmt print(std::vector<Expr> args, SourcePos pos = {});
  static Stmt if_(Expr cond, std::vector<Stmt> then_body,
                  std::vector<Stmt> else_body, SourcePos pos = {});
  static Stmt while_(Expr cond, std::vector<Stmt> body, SourcePos pos = {});
  static Stmt for_range(std::string var, Expr lo, Expr hi,
                        std::vector<Stmt> body, SourcePos pos = {});
  static Stmt return_(SourcePos pos = {});
  static Stmt return_(Expr value, SourcePos pos = {});
  static Stmt expr_stmt(Expr call, SourcePos pos = {});

  bool is_compound() const noexcept {
    return kind == Kind::If || kind == Kind::While || kind == Kind::ForRange;
  }
};

struct Param {
  std::string name;
  Type type = Type::Int;
};

struct FuncDef {
  std::string name;
  std::vector<Param> params;
  Type return_type = Type::Void;
  std::vector<Stmt> body;
  SourcePos pos;
};

struct Program {
  std::vector<FuncDef> functions;

  const FuncDef *find(std::string_view name) const noexcept;
  FuncDef *find(std::string_view name) noexcept;
  const FuncDef &main() const;
  FuncDef &main();
};

//===----------------------------------------------------------------------===//
// Traversal
//===----------------------------------------------------------------------===//

/// Visits statements in pre-order (then-branch before else-branch).
void for_each_stmt(std::span<const Stmt> stmts,
                   const std::function<void(const Stmt &)> &fn);
void for_each_stmt(std::span<Stmt> stmts,
                   const std::function<void(Stmt &)> &fn);

/// Visits an expression tree in pre-order.
void for_each_expr(const Expr &e, const std::function<void(const Expr &)> &fn);
void for_each_expr(Expr &e, const std::function<void(Expr &)> &fn);

/// Visits every expression owned directly by `s` (not by nested statements).
void for_each_own_expr(const Stmt &s,
                       const std::function<void(const Expr &)> &fn);
void for_each_own_expr(Stmt &s, const std::function<void(Expr &)> &fn);

std::size_t count_stmts(std::span<const Stmt> stmts);

/// Renumbers every statement of `p` in pre-order across functions in
/// declaration order. Returns the previous id of each new id.
std::vector<StmtId> renumber(Program &p);

//===----------------------------------------------------------------------===//
// Structural equality
//===----------------------------------------------------------------------===//

// Ignores SourcePos and StmtId.
bool ast_equal(const Expr &a, const Expr &b);
bool ast_equal(const Stmt &a, const Stmt &b);
bool ast_equal(std::span<const Stmt> a, std::span<const Stmt> b);
bool ast_equal(const FuncDef &a, const FuncDef &b);
bool ast_equal(const Program &a, const Program &b);

} // namespace decomplab

#endif // DECOMPLAB_LANG_AST_HPP
