#include "decomplab/lang/ast.hpp"

#include <bit>

namespace decomplab {

std::string_view type_name(Type t) noexcept {
  switch (t) {
  case Type::Int:
    return "int";
  case Type::Float:
    return "float";
  case Type::Bool:
    return "bool";
  case Type::String:
    return "string";
  case Type::List:
    return "list";
  case Type::Void:
    return "void";
  }
  return "?";
}

std::string_view op_spelling(BinaryOp op) noexcept {
  switch (op) {
  case BinaryOp::Add:
    return "+";
  case BinaryOp::Sub:
    return "-";
  case BinaryOp::Mul:
    return "*";
  case BinaryOp::Div:
    return "/";
  case BinaryOp::Mod:
    return "%";
  case BinaryOp::Eq:
    return "==";
  case BinaryOp::Ne:
    return "!=";
  case BinaryOp::Lt:
    return "<";
  case BinaryOp::Le:
    return "<=";
  case BinaryOp::Gt:
    return ">";
  case BinaryOp::Ge:
    return ">=";
  case BinaryOp::And:
    return "and";
  case BinaryOp::Or:
    return "or";
  }
  return "?";
}

std::string_view op_spelling(UnaryOp op) noexcept {
  return op == UnaryOp::Neg ? "-" : "not";
}

bool is_comparison(BinaryOp op) noexcept {
  switch (op) {
  case BinaryOp::Eq:
  case BinaryOp::Ne:
  case BinaryOp::Lt:
  case BinaryOp::Le:
  case BinaryOp::Gt:
  case BinaryOp::Ge:
    return true;
  default:
    return false;
  }
}

//===----------------------------------------------------------------------===//
// Factories
//===----------------------------------------------------------------------===//

Expr Expr::int_lit(std::int64_t v, SourcePos pos) {
  Expr e;
  e.kind = Kind::IntLit;
  e.int_value = v;
  e.pos = pos;
  return e;
}

Expr Expr::float_lit(double v, SourcePos pos) {
  Expr e;
  e.kind = Kind::FloatLit;
  e.float_value = v;
  e.pos = pos;
  return e;
}

Expr Expr::bool_lit(bool v, SourcePos pos) {
  Expr e;
  e.kind = Kind::BoolLit;
  e.bool_value = v;
  e.pos = pos;
  return e;
}

Expr Expr::str_lit(std::string v, SourcePos pos) {
  Expr e;
  e.kind = Kind::StrLit;
  e.name = std::move(v);
  e.pos = pos;
  return e;
}

Expr Expr::list_lit(std::vector<Expr> elems, SourcePos pos) {
  Expr e;
  e.kind = Kind::ListLit;
  e.operands = std::move(elems);
  e.pos = pos;
  return e;
}

Expr Expr::var(std::string name, SourcePos pos) {
  Expr e;
  e.kind = Kind::Var;
  e.name = std::move(name);
  e.pos = pos;
  return e;
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs, SourcePos pos) {
  Expr e;
  e.kind = Kind::Binary;
  e.binary_op = op;
  e.operands.push_back(std::move(lhs));
  e.operands.push_back(std::move(rhs));
  e.pos = pos;
  return e;
}

Expr Expr::unary(UnaryOp op, Expr operand, SourcePos pos) {
  Expr e;
  e.kind = Kind::Unary;
  e.unary_op = op;
  e.operands.push_back(std::move(operand));
  e.pos = pos;
  return e;
}

Expr Expr::call(std::string callee, std::vector<Expr> args, SourcePos pos) {
  Expr e;
  e.kind = Kind::Call;
  e.name = std::move(callee);
  e.operands = std::move(args);
  e.pos = pos;
  return e;
}

Expr Expr::index(Expr base, Expr idx, SourcePos pos) {
  Expr e;
  e.kind = Kind::Index;
  e.operands.push_back(std::move(base));
  e.operands.push_back(std::move(idx));
  e.pos = pos;
  return e;
}

Expr Expr::len(Expr arg, SourcePos pos) {
  Expr e;
  e.kind = Kind::Len;
  e.operands.push_back(std::move(arg));
  e.pos = pos;
  return e;
}

Expr Expr::hole(SourcePos pos) {
  Expr e;
  e.kind = Kind::Hole;
  e.pos = pos;
  return e;
}

Stmt Stmt::assign(std::string target, Expr value, SourcePos pos) {
  Stmt s;
  s.kind = Kind::Assign;
  s.target = std::move(target);
  s.exprs.push_back(std::move(value));
  s.pos = pos;
  return s;
}

Stmt Stmt::index_assign(std::string target, Expr idx, Expr value,
                        SourcePos pos) {
  Stmt s;
  s.kind = Kind::IndexAssign;
  s.target = std::move(target);
  s.exprs.push_back(std::move(idx));
  s.exprs.push_back(std::move(value));
  s.pos = pos;
  return s;
}

Stmt Stmt::print(std::vector<Expr> args, SourcePos pos) {
  Stmt s;
  s.kind = Kind::Print;
  s.exprs = std::move(args);
  s.pos = pos;
  return s;
}

Stmt Stmt::if_(Expr cond, std::vector<Stmt> then_body,
               std::vector<Stmt> else_body, SourcePos pos) {
  Stmt s;
  s.kind = Kind::If;
  s.exprs.push_back(std::move(cond));
  s.body = std::move(then_body);
  s.orelse = std::move(else_body);
  s.pos = pos;
  return s;
}

Stmt Stmt::while_(Expr cond, std::vector<Stmt> body, SourcePos pos) {
  Stmt s;
  s.kind = Kind::While;
  s.exprs.push_back(std::move(cond));
  s.body = std::move(body);
  s.pos = pos;
  return s;
}

Stmt Stmt::for_range(std::string var, Expr lo, Expr hi, std::vector<Stmt> body,
                     SourcePos pos) {
  Stmt s;
  s.kind = Kind::ForRange;
  s.target = std::move(var);
  s.exprs.push_back(std::move(lo));
  s.exprs.push_back(std::move(hi));
  s.body = std::move(body);
  s.pos = pos;
  return s;
}

Stmt Stmt::return_(SourcePos pos) {
  Stmt s;
  s.kind = Kind::Return;
  s.pos = pos;
  return s;
}

Stmt Stmt::return_(Expr value, SourcePos pos) {
  Stmt s;
  s.kind = Kind::Return;
  s.exprs.push_back(std::move(value));
  s.pos = pos;
  return s;
}

Stmt Stmt::expr_stmt(Expr call, SourcePos pos) {
  Stmt s;
  s.kind = Kind::ExprStmt;
  s.exprs.push_back(std::move(call));
  s.pos = pos;
  return s;
}

const FuncDef *Program::find(std::string_view name) const noexcept {
  for (const auto &f : functions)
    if (f.name == name)
      return &f;
  return nullptr;
}

FuncDef *Program::find(std::string_view name) noexcept {
  for (auto &f : functions)
    if (f.name == name)
      return &f;
  return nullptr;
}

const FuncDef &Program::main() const {
  if (const auto *f = find("main"))
    return *f;
  throw std::logic_error("program has no main function");
}

FuncDef &Program::main() {
  if (auto *f = find("main"))
    return *f;
  throw std::logic_error("program has no main function");
}

//===----------------------------------------------------------------------===//
// Traversal
//===----------------------------------------------------------------------===//

void for_each_stmt(std::span<const Stmt> stmts,
                   const std::function<void(const Stmt &)> &fn) {
  for (const auto &s : stmts) {
    fn(s);
    for_each_stmt(s.body, fn);
    for_each_stmt(s.orelse, fn);
  }
}

void for_each_stmt(std::span<Stmt> stmts,
                   const std::function<void(Stmt &)> &fn) {
  for (auto &s : stmts) {
    fn(s);
    for_each_stmt(std::span<Stmt>(s.body), fn);
    for_each_stmt(std::span<Stmt>(s.orelse), fn);
  }
}

void for_each_expr(const Expr &e, const std::function<void(const Expr &)> &fn) {
  fn(e);
  for (const auto &op : e.operands)
    for_each_expr(op, fn);
}

void for_each_expr(Expr &e, const std::function<void(Expr &)> &fn) {
  fn(e);
  for (auto &op : e.operands)
    for_each_expr(op, fn);
}

void for_each_own_expr(const Stmt &s,
                       const std::function<void(const Expr &)> &fn) {
  for (const auto &e : s.exprs)
    for_each_expr(e, fn);
}

void for_each_own_expr(Stmt &s, const std::function<void(Expr &)> &fn) {
  for (auto &e : s.exprs)
    for_each_expr(e, fn);
}

std::size_t count_stmts(std::span<const Stmt> stmts) {
  std::size_t n = 0;
  for_each_stmt(stmts, [&](const Stmt &) { ++n; });
  return n;
}

std::vector<StmtId> renumber(Program &p) {
  std::vector<StmtId> previous;
  for (auto &f : p.functions) {
    for_each_stmt(std::span<Stmt>(f.body), [&](Stmt &s) {
      previous.push_back(s.id);
      s.id = StmtId{static_cast<std::int32_t>(previous.size() - 1)};
    });
  }
  return previous;
}

//===----------------------------------------------------------------------===//
// Structural equality
//===----------------------------------------------------------------------===//

bool ast_equal(const Expr &a, const Expr &b) {
  if (a.kind != b.kind || a.operands.size() != b.operands.size())
    return false;
  switch (a.kind) {
  case Expr::Kind::IntLit:
    if (a.int_value != b.int_value)
      return false;
    break;
  case Expr::Kind::FloatLit:
    if (std::bit_cast<std::uint64_t>(a.float_value) !=
        std::bit_cast<std::uint64_t>(b.float_value))
      return false;
    break;
  case Expr::Kind::BoolLit:
    if (a.bool_value != b.bool_value)
      return false;
    break;
  case Expr::Kind::StrLit:
  case Expr::Kind::Var:
  case Expr::Kind::Call:
    if (a.name != b.name)
      return false;
    break;
  case Expr::Kind::Binary:
    if (a.binary_op != b.binary_op)
      return false;
    break;
  case Expr::Kind::Unary:
    if (a.unary_op != b.unary_op)
      return false;
    break;
  case Expr::Kind::ListLit:
  case Expr::Kind::Index:
  case Expr::Kind::Len:
  case Expr::Kind::Hole:
    break;
  }
  for (std::size_t i = 0; i < a.operands.size(); ++i)
    if (!ast_equal(a.operands[i], b.operands[i]))
      return false;
  return true;
}

bool ast_equal(const Stmt &a, const Stmt &b) {
  if (a.kind != b.kind || a.target != b.target ||
      a.exprs.size() != b.exprs.size())
    return false;
  for (std::size_t i = 0; i < a.exprs.size(); ++i)
    if (!ast_equal(a.exprs[i], b.exprs[i]))
      return false;
  return ast_equal(a.body, b.body) && ast_equal(a.orelse, b.orelse);
}

bool ast_equal(std::span<const Stmt> a, std::span<const Stmt> b) {
  if (a.size() != b.size())
    return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!ast_equal(a[i], b[i]))
      return false;
  return true;
}

bool ast_equal(const FuncDef &a, const FuncDef &b) {
  if (a.name != b.name || a.return_type != b.return_type ||
      a.params.size() != b.params.size())
    return false;
  for (std::size_t i = 0; i < a.params.size(); ++i)
    if (a.params[i].name != b.params[i].name ||
        a.params[i].type != b.params[i].type)
      return false;
  return ast_equal(a.body, b.body);
}

bool ast_equal(const Program &a, const Program &b) {
  if (a.functions.size() != b.functions.size())
    return false;
  for (std::size_t i = 0; i < a.functions.size(); ++i)
    if (!ast_equal(a.functions[i], b.functions[i]))
      return false;
  return true;
}

} // namespace decomplab
