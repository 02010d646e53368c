//===--- parser.cpp - MiniProc lexer and recursive-descent parser ---------===//

#include "decomplab/lang/parser.hpp"

#include <charconv>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace decomplab {

ParseError::ParseError(Kind kind, SourcePos pos, std::string message,
                       std::vector<std::string> expected)
    : std::runtime_error(std::move(message)), kind_(kind), pos_(pos),
      expected_(std::move(expected)) {}

std::string_view to_string(ParseError::Kind kind) noexcept {
  switch (kind) {
  case ParseError::Kind::Syntax:
    return "SyntaxError";
  case ParseError::Kind::DuplicateFunction:
    return "DuplicateFunction";
  case ParseError::Kind::MissingMain:
    return "MissingMain";
  case ParseError::Kind::RecursionNotSupported:
    return "RecursionNotSupported";
  case ParseError::Kind::UnknownFunction:
    return "UnknownFunction";
  case ParseError::Kind::DuplicateParameter:
    return "DuplicateParameter";
  case ParseError::Kind::MissingReturn:
    return "MissingReturn";
  case ParseError::Kind::InvalidReturn:
    return "InvalidReturn";
  }
  return "ParseError";
}

namespace {

enum class Tok {
  Ident,
  Int,
  Float,
  String,
  Keyword,
  Punct,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text; // keyword/punct spelling, identifier, digits, or
                    // unescaped string contents
  SourcePos pos;
};

const std::set<std::string, std::less<>> kKeywords = {
    "func",  "int",    "float", "bool", "string", "list",  "void",
    "print", "if",     "else",  "while", "for",   "in",    "range",
    "return", "and",   "or",    "not",  "true",   "false", "len"};

[[noreturn]] void syntax_error(SourcePos pos, const std::string &msg,
                               std::vector<std::string> expected = {}) {
  std::ostringstream os;
  os << "syntax error at " << pos.line << ":" << pos.column << ": " << msg;
  if (!expected.empty()) {
    os << " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i)
      os << (i ? ", " : "") << expected[i];
    os << ")";
  }
  throw ParseError(ParseError::Kind::Syntax, pos, os.str(),
                   std::move(expected));
}

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.pos = {line_, col_};
      if (at_end()) {
        t.kind = Tok::End;
        out.push_back(std::move(t));
        return out;
      }
      char c = peek();
      if (is_ident_start(c)) {
        std::string word;
        while (!at_end() && is_ident_char(peek()))
          word += advance();
        t.kind = kKeywords.count(word) ? Tok::Keyword : Tok::Ident;
        t.text = std::move(word);
      } else if (is_digit(c)) {
        lex_number(t);
      } else if (c == '"') {
        lex_string(t);
      } else {
        lex_punct(t);
      }
      out.push_back(std::move(t));
    }
  }

private:
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }
  static bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

  bool at_end() const { return i_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const {
    return i_ + ahead < src_.size() ? src_[i_ + ahead] : '\0';
  }
  char advance() {
    char c = src_[i_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space() {
    while (!at_end()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '#') {
        while (!at_end() && peek() != '\n')
          advance();
      } else {
        break;
      }
    }
  }

  void lex_number(Token &t) {
    std::string text;
    bool is_float = false;
    while (is_digit(peek()))
      text += advance();
    if (peek() == '.' && is_digit(peek(1))) {
      is_float = true;
      text += advance();
      while (is_digit(peek()))
        text += advance();
    }
    if (peek() == 'e' || peek() == 'E') {
      std::size_t k = 1;
      if (peek(1) == '+' || peek(1) == '-')
        k = 2;
      if (is_digit(peek(k))) {
        is_float = true;
        for (std::size_t j = 0; j < k; ++j)
          text += advance();
        while (is_digit(peek()))
          text += advance();
      }
    }
    if (is_ident_start(peek()))
      syntax_error({line_, col_}, "malformed number literal");
    t.kind = is_float ? Tok::Float : Tok::Int;
    t.text = std::move(text);
  }

  void lex_string(Token &t) {
    advance(); // opening quote
    std::string out;
    for (;;) {
      if (at_end() || peek() == '\n')
        syntax_error(t.pos, "unterminated string literal");
      char c = advance();
      if (c == '"')
        break;
      if (c == '\\') {
        if (at_end())
          syntax_error(t.pos, "unterminated string literal");
        char e = advance();
        switch (e) {
        case 'n':
          out += '\n';
          break;
        case 't':
          out += '\t';
          break;
        case '"':
          out += '"';
          break;
        case '\\':
          out += '\\';
          break;
        default:
          syntax_error({line_, col_ - 1}, "unknown escape sequence");
        }
      } else {
        out += c;
      }
    }
    t.kind = Tok::String;
    t.text = std::move(out);
  }

  void lex_punct(Token &t) {
    static const char *const kTwo[] = {"->", "==", "!=", "<=", ">="};
    for (const char *p : kTwo) {
      if (peek() == p[0] && peek(1) == p[1]) {
        advance();
        advance();
        t.kind = Tok::Punct;
        t.text = p;
        return;
      }
    }
    static const std::string_view kOne = "(){}[],:=+-*/%<>";
    char c = peek();
    if (kOne.find(c) == std::string_view::npos)
      syntax_error(t.pos, std::string("unexpected character '") + c + "'");
    advance();
    t.kind = Tok::Punct;
    t.text = std::string(1, c);
  }

  std::string_view src_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program program() {
    Program p;
    do {
      p.functions.push_back(funcdef());
    } while (!at(Tok::End));
    return p;
  }

private:
  const Token &cur() const { return toks_[i_]; }
  const Token &next_tok() const {
    return toks_[std::min(i_ + 1, toks_.size() - 1)];
  }
  bool at(Tok k) const { return cur().kind == k; }
  bool at(std::string_view spelling) const {
    return (cur().kind == Tok::Keyword || cur().kind == Tok::Punct) &&
           cur().text == spelling;
  }
  Token take() { return toks_[i_++]; }

  std::string describe(const Token &t) const {
    switch (t.kind) {
    case Tok::End:
      return "end of input";
    case Tok::Ident:
      return "identifier '" + t.text + "'";
    case Tok::Int:
    case Tok::Float:
      return "number '" + t.text + "'";
    case Tok::String:
      return "string literal";
    default:
      return "'" + t.text + "'";
    }
  }

  Token expect(std::string_view spelling) {
    if (!at(spelling))
      syntax_error(cur().pos, "unexpected " + describe(cur()),
                   {"'" + std::string(spelling) + "'"});
    return take();
  }

  Token expect_ident() {
    if (!at(Tok::Ident))
      syntax_error(cur().pos, "unexpected " + describe(cur()), {"identifier"});
    return take();
  }

  FuncDef funcdef() {
    FuncDef f;
    f.pos = expect("func").pos;
    f.name = expect_ident().text;
    expect("(");
    if (!at(")")) {
      do {
        Param prm;
        prm.name = expect_ident().text;
        expect(":");
        prm.type = type(/*allow_void=*/false);
        f.params.push_back(std::move(prm));
      } while (at(",") && (take(), true));
    }
    expect(")");
    expect("->");
    f.return_type = type(/*allow_void=*/true);
    f.body = block();
    return f;
  }

  Type type(bool allow_void) {
    static const std::map<std::string, Type, std::less<>> kTypes = {
        {"int", Type::Int},       {"float", Type::Float},
        {"bool", Type::Bool},     {"string", Type::String},
        {"list", Type::List},     {"void", Type::Void}};
    if (cur().kind == Tok::Keyword) {
      auto it = kTypes.find(cur().text);
      if (it != kTypes.end() && (allow_void || it->second != Type::Void)) {
        take();
        return it->second;
      }
    }
    std::vector<std::string> exp = {"'int'", "'float'", "'bool'", "'string'",
                                    "'list'"};
    if (allow_void)
      exp.push_back("'void'");
    syntax_error(cur().pos, "unexpected " + describe(cur()), std::move(exp));
  }

  std::vector<Stmt> block() {
    expect("{");
    std::vector<Stmt> out;
    while (!at("}")) {
      if (at(Tok::End))
        syntax_error(cur().pos, "unexpected end of input", {"'}'"});
      out.push_back(stmt());
    }
    take();
    return out;
  }

  Stmt stmt() {
    SourcePos pos = cur().pos;
    if (at("print")) {
      take();
      expect("(");
      std::vector<Expr> args;
      if (!at(")"))
        args = exprlist();
      expect(")");
      return Stmt::print(std::move(args), pos);
    }
    if (at("if")) {
      take();
      Expr cond = expr();
      auto then_body = block();
      std::vector<Stmt> else_body;
      if (at("else")) {
        take();
        else_body = block();
      }
      return Stmt::if_(std::move(cond), std::move(then_body),
                       std::move(else_body), pos);
    }
    if (at("while")) {
      take();
      Expr cond = expr();
      return Stmt::while_(std::move(cond), block(), pos);
    }
    if (at("for")) {
      take();
      std::string var = expect_ident().text;
      expect("in");
      expect("range");
      expect("(");
      Expr lo = expr();
      expect(",");
      Expr hi = expr();
      expect(")");
      return Stmt::for_range(std::move(var), std::move(lo), std::move(hi),
                             block(), pos);
    }
    if (at("return")) {
      Token ret = take();
      // A value must start on the same line as the keyword.
      if (cur().pos.line == ret.pos.line && !at("}") && !at(Tok::End))
        return Stmt::return_(expr(), pos);
      return Stmt::return_(pos);
    }
    if (at(Tok::Ident)) {
      const Token &after = next_tok();
      if (after.kind == Tok::Punct && after.text == "=") {
        std::string target = take().text;
        take();
        return Stmt::assign(std::move(target), expr(), pos);
      }
      if (after.kind == Tok::Punct && after.text == "[") {
        std::string target = take().text;
        take();
        Expr idx = expr();
        expect("]");
        expect("=");
        return Stmt::index_assign(std::move(target), std::move(idx), expr(),
                                  pos);
      }
      if (after.kind == Tok::Punct && after.text == "(") {
        Expr call = primary();
        return Stmt::expr_stmt(std::move(call), pos);
      }
      take();
      syntax_error(cur().pos, "unexpected " + describe(cur()),
                   {"'='", "'['", "'('"});
    }
    syntax_error(cur().pos, "unexpected " + describe(cur()),
                 {"statement", "'}'"});
  }

  std::vector<Expr> exprlist() {
    std::vector<Expr> out;
    out.push_back(expr());
    while (at(",")) {
      take();
      out.push_back(expr());
    }
    return out;
  }

  Expr expr() { return or_expr(); }

  Expr or_expr() {
    Expr lhs = and_expr();
    while (at("or")) {
      SourcePos pos = take().pos;
      lhs = Expr::binary(BinaryOp::Or, std::move(lhs), and_expr(), pos);
    }
    return lhs;
  }

  Expr and_expr() {
    Expr lhs = not_expr();
    while (at("and")) {
      SourcePos pos = take().pos;
      lhs = Expr::binary(BinaryOp::And, std::move(lhs), not_expr(), pos);
    }
    return lhs;
  }

  Expr not_expr() {
    if (at("not")) {
      SourcePos pos = take().pos;
      return Expr::unary(UnaryOp::Not, not_expr(), pos);
    }
    return cmp_expr();
  }

  bool at_comparison(BinaryOp &op) const {
    static const std::map<std::string, BinaryOp, std::less<>> kCmp = {
        {"==", BinaryOp::Eq}, {"!=", BinaryOp::Ne}, {"<", BinaryOp::Lt},
        {"<=", BinaryOp::Le}, {">", BinaryOp::Gt},  {">=", BinaryOp::Ge}};
    if (cur().kind != Tok::Punct)
      return false;
    auto it = kCmp.find(cur().text);
    if (it == kCmp.end())
      return false;
    op = it->second;
    return true;
  }

  Expr cmp_expr() {
    Expr lhs = add_expr();
    BinaryOp op;
    if (at_comparison(op)) {
      SourcePos pos = take().pos;
      lhs = Expr::binary(op, std::move(lhs), add_expr(), pos);
      if (at_comparison(op))
        syntax_error(cur().pos, "comparison operators do not chain");
    }
    return lhs;
  }

  Expr add_expr() {
    Expr lhs = mul_expr();
    while (at("+") || at("-")) {
      Token t = take();
      lhs = Expr::binary(t.text == "+" ? BinaryOp::Add : BinaryOp::Sub,
                         std::move(lhs), mul_expr(), t.pos);
    }
    return lhs;
  }

  Expr mul_expr() {
    Expr lhs = unary();
    while (at("*") || at("/") || at("%")) {
      Token t = take();
      BinaryOp op = t.text == "*"   ? BinaryOp::Mul
                    : t.text == "/" ? BinaryOp::Div
                                    : BinaryOp::Mod;
      lhs = Expr::binary(op, std::move(lhs), unary(), t.pos);
    }
    return lhs;
  }

  Expr unary() {
    if (at("-")) {
      SourcePos pos = take().pos;
      // A minus sign directly before a number is part of the literal,
      // unless indexing binds the number first.
      bool indexed = next_tok().kind == Tok::Punct && next_tok().text == "[";
      if ((at(Tok::Int) || at(Tok::Float)) && !indexed)
        return number(/*negate=*/true, pos);
      return Expr::unary(UnaryOp::Neg, unary(), pos);
    }
    return postfix(primary());
  }

  Expr postfix(Expr base) {
    while (at("[")) {
      SourcePos pos = take().pos;
      Expr idx = expr();
      expect("]");
      base = Expr::index(std::move(base), std::move(idx), pos);
    }
    return base;
  }

  Expr number(bool negate, SourcePos pos) {
    Token t = take();
    if (t.kind == Tok::Float) {
      double v = 0;
      auto [p, ec] =
          std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
      if (ec != std::errc())
        syntax_error(t.pos, "float literal out of range");
      return Expr::float_lit(negate ? -v : v, pos);
    }
    std::uint64_t mag = 0;
    auto [p, ec] =
        std::from_chars(t.text.data(), t.text.data() + t.text.size(), mag);
    constexpr auto kMax =
        static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());
    if (ec != std::errc() || mag > kMax + (negate ? 1 : 0))
      syntax_error(t.pos, "integer literal out of range");
    if (!negate)
      return Expr::int_lit(static_cast<std::int64_t>(mag), pos);
    if (mag == kMax + 1)
      return Expr::int_lit(std::numeric_limits<std::int64_t>::min(), pos);
    return Expr::int_lit(-static_cast<std::int64_t>(mag), pos);
  }

  Expr primary() {
    SourcePos pos = cur().pos;
    if (at(Tok::Int) || at(Tok::Float))
      return number(/*negate=*/false, pos);
    if (at(Tok::String))
      return Expr::str_lit(take().text, pos);
    if (at("true") || at("false"))
      return Expr::bool_lit(take().text == "true", pos);
    if (at("[")) {
      take();
      std::vector<Expr> elems;
      if (!at("]"))
        elems = exprlist();
      expect("]");
      return Expr::list_lit(std::move(elems), pos);
    }
    if (at("len")) {
      take();
      expect("(");
      Expr arg = expr();
      expect(")");
      return Expr::len(std::move(arg), pos);
    }
    if (at("(")) {
      take();
      Expr inner = expr();
      expect(")");
      return inner;
    }
    if (at(Tok::Ident)) {
      std::string name = take().text;
      if (at("(")) {
        take();
        std::vector<Expr> args;
        if (!at(")"))
          args = exprlist();
        expect(")");
        return Expr::call(std::move(name), std::move(args), pos);
      }
      return Expr::var(std::move(name), pos);
    }
    syntax_error(cur().pos, "unexpected " + describe(cur()), {"expression"});
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

bool ends_in_return(std::span<const Stmt> body) {
  if (body.empty())
    return false;
  const Stmt &last = body.back();
  if (last.kind == Stmt::Kind::Return)
    return true;
  if (last.kind == Stmt::Kind::If)
    return ends_in_return(last.body) && ends_in_return(last.orelse);
  return false;
}

void collect_calls(std::span<const Stmt> body,
                   std::vector<const Expr *> &calls) {
  for_each_stmt(body, [&](const Stmt &s) {
    for_each_own_expr(s, [&](const Expr &e) {
      if (e.kind == Expr::Kind::Call)
        calls.push_back(&e);
    });
  });
}

} // namespace

void check_program(const Program &p) {
  std::map<std::string, const FuncDef *, std::less<>> by_name;
  for (const auto &f : p.functions) {
    if (!by_name.emplace(f.name, &f).second)
      throw ParseError(ParseError::Kind::DuplicateFunction, f.pos,
                       "duplicate function '" + f.name + "'");
    std::set<std::string> params;
    for (const auto &prm : f.params)
      if (!params.insert(prm.name).second)
        throw ParseError(ParseError::Kind::DuplicateParameter, f.pos,
                         "duplicate parameter '" + prm.name + "' in '" +
                             f.name + "'");
  }
  if (!by_name.count("main"))
    throw ParseError(ParseError::Kind::MissingMain, {1, 1},
                     "program has no 'main' function");

  for (const auto &f : p.functions) {
    for_each_stmt(f.body, [&](const Stmt &s) {
      if (s.kind != Stmt::Kind::Return)
        return;
      bool has_value = !s.exprs.empty();
      if (has_value != (f.return_type != Type::Void))
        throw ParseError(ParseError::Kind::InvalidReturn, s.pos,
                         f.return_type == Type::Void
                             ? "void function '" + f.name +
                                   "' returns a value"
                             : "function '" + f.name +
                                   "' must return a value");
    });
    if (f.return_type != Type::Void && !ends_in_return(f.body))
      throw ParseError(ParseError::Kind::MissingReturn, f.pos,
                       "not every path of '" + f.name + "' ends in a return");
  }

  // Call resolution, then cycle detection over the call graph.
  std::map<std::string, std::vector<const Expr *>, std::less<>> calls;
  for (const auto &f : p.functions) {
    auto &out = calls[f.name];
    collect_calls(f.body, out);
    for (const Expr *c : out)
      if (!by_name.count(c->name))
        throw ParseError(ParseError::Kind::UnknownFunction, c->pos,
                         "call to undefined function '" + c->name + "'");
  }
  enum class Mark { None, Active, Done };
  std::map<std::string, Mark, std::less<>> mark;
  std::function<void(const std::string &)> visit =
      [&](const std::string &name) {
        mark[name] = Mark::Active;
        for (const Expr *c : calls[name]) {
          Mark m = mark[c->name];
          if (m == Mark::Active)
            throw ParseError(ParseError::Kind::RecursionNotSupported, c->pos,
                             "recursive call to '" + c->name + "'");
          if (m == Mark::None)
            visit(c->name);
        }
        mark[name] = Mark::Done;
      };
  for (const auto &f : p.functions)
    if (mark[f.name] == Mark::None)
      visit(f.name);
}

Program parse(std::string_view source) {
  Parser parser(Lexer(source).run());
  Program p = parser.program();
  check_program(p);
  renumber(p);
  return p;
}

} // namespace decomplab
