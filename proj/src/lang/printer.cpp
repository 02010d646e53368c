#include "decomplab/lang/printer.hpp"

#include <charconv>
#include <cmath>

namespace decomplab {

namespace {

// Binding strength, low to high.
constexpr int kPrecOr = 1;
constexpr int kPrecAnd = 2;
constexpr int kPrecNot = 3;
constexpr int kPrecCmp = 4;
constexpr int kPrecAdd = 5;
constexpr int kPrecMul = 6;
constexpr int kPrecNeg = 7;
constexpr int kPrecAtom = 8;

int precedence(BinaryOp op) {
  switch (op) {
  case BinaryOp::Or:
    return kPrecOr;
  case BinaryOp::And:
    return kPrecAnd;
  case BinaryOp::Add:
  case BinaryOp::Sub:
    return kPrecAdd;
  case BinaryOp::Mul:
  case BinaryOp::Div:
  case BinaryOp::Mod:
    return kPrecMul;
  default:
    return kPrecCmp;
  }
}

bool is_negative_literal(const Expr &e) {
  return (e.kind == Expr::Kind::IntLit && e.int_value < 0) ||
         (e.kind == Expr::Kind::FloatLit && std::signbit(e.float_value));
}

int precedence(const Expr &e) {
  switch (e.kind) {
  case Expr::Kind::Binary:
    return precedence(e.binary_op);
  case Expr::Kind::Unary:
    return e.unary_op == UnaryOp::Not ? kPrecNot : kPrecNeg;
  case Expr::Kind::IntLit:
  case Expr::Kind::FloatLit:
    return is_negative_literal(e) ? kPrecNeg : kPrecAtom;
  default:
    return kPrecAtom;
  }
}

void escape_into(std::string &out, const std::string &s) {
  out += '"';
  for (char c : s) {
    switch (c) {
    case '"':
      out += "\\\"";
      break;
    case '\\':
      out += "\\\\";
      break;
    case '\n':
      out += "\\n";
      break;
    case '\t':
      out += "\\t";
      break;
    default:
      out += c;
    }
  }
  out += '"';
}

void print_expr(std::string &out, const Expr &e, int min_prec);

void print_list(std::string &out, const std::vector<Expr> &items) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i)
      out += ", ";
    print_expr(out, items[i], 0);
  }
}

void print_expr(std::string &out, const Expr &e, int min_prec) {
  bool parens = precedence(e) < min_prec;
  if (parens)
    out += '(';
  switch (e.kind) {
  case Expr::Kind::IntLit:
    out += std::to_string(e.int_value);
    break;
  case Expr::Kind::FloatLit:
    out += float_literal_text(e.float_value);
    break;
  case Expr::Kind::BoolLit:
    out += e.bool_value ? "true" : "false";
    break;
  case Expr::Kind::StrLit:
    escape_into(out, e.name);
    break;
  case Expr::Kind::ListLit:
    out += '[';
    print_list(out, e.operands);
    out += ']';
    break;
  case Expr::Kind::Var:
    out += e.name;
    break;
  case Expr::Kind::Binary: {
    int p = precedence(e.binary_op);
    bool cmp = is_comparison(e.binary_op);
    print_expr(out, e.operands[0], cmp ? p + 1 : p);
    out += ' ';
    out += op_spelling(e.binary_op);
    out += ' ';
    print_expr(out, e.operands[1], p + 1);
    break;
  }
  case Expr::Kind::Unary: {
    const Expr &arg = e.operands[0];
    if (e.unary_op == UnaryOp::Not) {
      out += "not ";
      print_expr(out, arg, kPrecNot);
    } else {
      out += '-';
      // "-7" would read back as a negative literal.
      bool literal = (arg.kind == Expr::Kind::IntLit ||
                      arg.kind == Expr::Kind::FloatLit) &&
                     !is_negative_literal(arg);
      print_expr(out, arg, literal ? kPrecAtom + 1 : kPrecNeg);
    }
    break;
  }
  case Expr::Kind::Call:
    out += e.name;
    out += '(';
    print_list(out, e.operands);
    out += ')';
    break;
  case Expr::Kind::Index:
    print_expr(out, e.operands[0], kPrecAtom);
    out += '[';
    print_expr(out, e.operands[1], 0);
    out += ']';
    break;
  case Expr::Kind::Len:
    out += "len(";
    print_expr(out, e.operands[0], 0);
    out += ')';
    break;
  case Expr::Kind::Hole:
    out += '?';
    break;
  }
  if (parens)
    out += ')';
}

void indent(std::string &out, int depth) { out.append(4 * depth, ' '); }

void print_stmts(std::string &out, std::span<const Stmt> stmts, int depth);

void print_block(std::string &out, std::span<const Stmt> stmts, int depth) {
  out += "{\n";
  print_stmts(out, stmts, depth + 1);
  indent(out, depth);
  out += '}';
}

void print_stmt(std::string &out, const Stmt &s, int depth) {
  indent(out, depth);
  switch (s.kind) {
  case Stmt::Kind::Assign:
    out += s.target + " = ";
    print_expr(out, s.exprs[0], 0);
    break;
  case Stmt::Kind::IndexAssign:
    out += s.target + "[";
    print_expr(out, s.exprs[0], 0);
    out += "] = ";
    print_expr(out, s.exprs[1], 0);
    break;
  case Stmt::Kind::Print:
    out += "print(";
    print_list(out, s.exprs);
    out += ')';
    break;
  case Stmt::Kind::If:
    out += "if ";
    print_expr(out, s.exprs[0], 0);
    out += ' ';
    print_block(out, s.body, depth);
    if (!s.orelse.empty()) {
      out += " else ";
      print_block(out, s.orelse, depth);
    }
    break;
  case Stmt::Kind::While:
    out += "while ";
    print_expr(out, s.exprs[0], 0);
    out += ' ';
    print_block(out, s.body, depth);
    break;
  case Stmt::Kind::ForRange:
    out += "for " + s.target + " in range(";
    print_expr(out, s.exprs[0], 0);
    out += ", ";
    print_expr(out, s.exprs[1], 0);
    out += ") ";
    print_block(out, s.body, depth);
    break;
  case Stmt::Kind::Return:
    out += "return";
    if (!s.exprs.empty()) {
      out += ' ';
      print_expr(out, s.exprs[0], 0);
    }
    break;
  case Stmt::Kind::ExprStmt:
    print_expr(out, s.exprs[0], 0);
    break;
  }
  out += '\n';
}

void print_stmts(std::string &out, std::span<const Stmt> stmts, int depth) {
  for (const auto &s : stmts)
    print_stmt(out, s, depth);
}

} // namespace

std::string float_literal_text(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, end);
  if (s.find_first_of(".eEin") == std::string::npos)
    s += ".0";
  return s;
}

std::string pretty_print(const Expr &e) {
  std::string out;
  print_expr(out, e, 0);
  return out;
}

std::string pretty_print(std::span<const Stmt> stmts, int depth) {
  std::string out;
  print_stmts(out, stmts, depth);
  return out;
}

std::string pretty_print(const Program &p) {
  std::string out;
  for (std::size_t i = 0; i < p.functions.size(); ++i) {
    const FuncDef &f = p.functions[i];
    if (i)
      out += '\n';
    out += "func " + f.name + "(";
    for (std::size_t k = 0; k < f.params.size(); ++k) {
      if (k)
        out += ", ";
      out += f.params[k].name;
      out += ": ";
      out += type_name(f.params[k].type);
    }
    out += ") -> ";
    out += type_name(f.return_type);
    out += " {\n";
    print_stmts(out, f.body, 1);
    out += "}\n";
  }
  return out;
}

} // namespace decomplab
