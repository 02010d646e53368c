//===--- interpreter.cpp - Tree-walking MiniProc evaluator ----------------===//

#include "decomplab/interp/interpreter.hpp"

#include <limits>
#include <unordered_map>

namespace decomplab {

RuntimeError::RuntimeError(Kind kind, SourcePos pos, const std::string &message)
    : std::runtime_error(std::string(to_string(kind)) + " at " +
                         std::to_string(pos.line) + ":" +
                         std::to_string(pos.column) + ": " + message),
      kind_(kind), pos_(pos) {}

std::string_view to_string(RuntimeError::Kind kind) noexcept {
  switch (kind) {
  case RuntimeError::Kind::DivisionByZero:
    return "DivisionByZero";
  case RuntimeError::Kind::IntOverflow:
    return "IntOverflow";
  case RuntimeError::Kind::IndexOutOfBounds:
    return "IndexOutOfBounds";
  case RuntimeError::Kind::TypeMismatch:
    return "TypeMismatch";
  case RuntimeError::Kind::StepLimitExceeded:
    return "StepLimitExceeded";
  case RuntimeError::Kind::ArityMismatch:
    return "ArityMismatch";
  case RuntimeError::Kind::UndefinedVariable:
    return "UndefinedVariable";
  case RuntimeError::Kind::ListLimitExceeded:
    return "ListLimitExceeded";
  }
  return "RuntimeError";
}

namespace {

using Kind = RuntimeError::Kind;
using Env = std::unordered_map<std::string, Value>;

class Interpreter {
public:
  Interpreter(const Program &p, const RunLimits &limits,
              std::vector<std::string> &lines)
      : program_(p), limits_(limits), lines_(lines) {}

  std::optional<Value> call(const FuncDef &f, std::vector<Value> args,
                            SourcePos call_pos) {
    if (args.size() != f.params.size())
      fail(Kind::ArityMismatch, call_pos,
           "'" + f.name + "' expects " + std::to_string(f.params.size()) +
               " argument(s), got " + std::to_string(args.size()));
    Env env;
    for (std::size_t i = 0; i < args.size(); ++i) {
      const Param &prm = f.params[i];
      if (!conforms(args[i], prm.type))
        fail(Kind::TypeMismatch, call_pos,
             "argument '" + prm.name + "' of '" + f.name + "' must be " +
                 std::string(type_name(prm.type)) + ", got " +
                 std::string(kind_name(args[i])));
      env[prm.name] = coerce(std::move(args[i]), prm.type);
    }
    std::optional<Value> ret;
    exec_block(f.body, env, ret);
    if (f.return_type == Type::Void)
      return std::nullopt;
    if (!ret || !conforms(*ret, f.return_type))
      fail(Kind::TypeMismatch, pos_,
           "'" + f.name + "' must return " +
               std::string(type_name(f.return_type)));
    return coerce(std::move(*ret), f.return_type);
  }

private:
  [[noreturn]] void fail(Kind k, SourcePos pos, const std::string &msg) const {
    throw RuntimeError(k, pos, msg);
  }
  [[noreturn]] void fail(Kind k, const std::string &msg) const {
    throw RuntimeError(k, pos_, msg);
  }

  void step() {
    if (++steps_ > limits_.max_steps)
      fail(Kind::StepLimitExceeded,
           "exceeded " + std::to_string(limits_.max_steps) + " steps");
  }

  /// Returns true once a Return has executed.
  bool exec_block(const std::vector<Stmt> &body, Env &env,
                  std::optional<Value> &ret) {
    for (const auto &s : body)
      if (exec(s, env, ret))
        return true;
    return false;
  }

  bool exec(const Stmt &s, Env &env, std::optional<Value> &ret) {
    pos_ = s.pos;
    step();
    switch (s.kind) {
    case Stmt::Kind::Assign:
      env[s.target] = eval(s.exprs[0], env);
      return false;
    case Stmt::Kind::IndexAssign: {
      Value idx = eval(s.exprs[0], env);
      Value val = eval(s.exprs[1], env);
      pos_ = s.pos;
      auto it = env.find(s.target);
      if (it == env.end())
        fail(Kind::UndefinedVariable, "'" + s.target + "' is not defined");
      if (!it->second.is_list())
        fail(Kind::TypeMismatch, "'" + s.target + "' is not a list");
      auto &items = it->second.as_list();
      std::size_t i = checked_index(idx, items.size());
      if (items[i].data.index() != val.data.index())
        fail(Kind::TypeMismatch, "list elements must share one type");
      items[i] = std::move(val);
      return false;
    }
    case Stmt::Kind::Print: {
      std::string line;
      for (std::size_t i = 0; i < s.exprs.size(); ++i) {
        if (i)
          line += ' ';
        line += format_value(eval(s.exprs[i], env));
      }
      lines_.push_back(std::move(line));
      return false;
    }
    case Stmt::Kind::If:
      if (eval_cond(s, env))
        return exec_block(s.body, env, ret);
      return exec_block(s.orelse, env, ret);
    case Stmt::Kind::While:
      while (eval_cond(s, env)) {
        if (exec_block(s.body, env, ret))
          return true;
        pos_ = s.pos;
        step();
      }
      return false;
    case Stmt::Kind::ForRange: {
      Value lo = eval(s.exprs[0], env);
      Value hi = eval(s.exprs[1], env);
      pos_ = s.pos;
      if (!lo.is_int() || !hi.is_int())
        fail(Kind::TypeMismatch, "range bounds must be int");
      for (std::int64_t v = lo.as_int(); v < hi.as_int(); ++v) {
        env[s.target] = Value(v);
        if (exec_block(s.body, env, ret))
          return true;
        pos_ = s.pos;
        step();
      }
      return false;
    }
    case Stmt::Kind::Return:
      if (!s.exprs.empty())
        ret = eval(s.exprs[0], env);
      return true;
    case Stmt::Kind::ExprStmt:
      eval(s.exprs[0], env);
      return false;
    }
    return false;
  }

  bool eval_cond(const Stmt &s, Env &env) {
    Value c = eval(s.exprs[0], env);
    pos_ = s.pos;
    if (!c.is_bool())
      fail(Kind::TypeMismatch, "condition must be bool, got " +
                                   std::string(kind_name(c)));
    return c.as_bool();
  }

  std::size_t checked_index(const Value &idx, std::size_t size) const {
    if (!idx.is_int())
      fail(Kind::TypeMismatch, "list index must be int");
    std::int64_t i = idx.as_int();
    if (i < 0 || static_cast<std::uint64_t>(i) >= size)
      fail(Kind::IndexOutOfBounds, "index " + std::to_string(i) +
                                       " out of bounds for length " +
                                       std::to_string(size));
    return static_cast<std::size_t>(i);
  }

  void check_homogeneous(const Value::List &items) const {
    for (const auto &v : items)
      if (v.data.index() != items.front().data.index())
        fail(Kind::TypeMismatch, "list elements must share one type");
  }

  void check_length(std::size_t n) const {
    if (n > limits_.max_list_len)
      fail(Kind::ListLimitExceeded,
           "list longer than " + std::to_string(limits_.max_list_len));
  }

  Value eval(const Expr &e, Env &env) {
    switch (e.kind) {
    case Expr::Kind::IntLit:
      return Value(e.int_value);
    case Expr::Kind::FloatLit:
      return Value(e.float_value);
    case Expr::Kind::BoolLit:
      return Value(e.bool_value);
    case Expr::Kind::StrLit:
      return Value(e.name);
    case Expr::Kind::ListLit: {
      Value::List items;
      items.reserve(e.operands.size());
      for (const auto &op : e.operands)
        items.push_back(eval(op, env));
      check_homogeneous(items);
      check_length(items.size());
      return Value(std::move(items));
    }
    case Expr::Kind::Var: {
      auto it = env.find(e.name);
      if (it == env.end())
        fail(Kind::UndefinedVariable, "'" + e.name + "' is not defined");
      return it->second;
    }
    case Expr::Kind::Binary:
      return eval_binary(e, env);
    case Expr::Kind::Unary: {
      Value v = eval(e.operands[0], env);
      if (e.unary_op == UnaryOp::Not) {
        if (!v.is_bool())
          fail(Kind::TypeMismatch, "'not' needs a bool");
        return Value(!v.as_bool());
      }
      if (v.is_int()) {
        if (v.as_int() == std::numeric_limits<std::int64_t>::min())
          fail(Kind::IntOverflow, "integer negation overflows");
        return Value(-v.as_int());
      }
      if (v.is_float())
        return Value(-v.as_float());
      fail(Kind::TypeMismatch, "unary '-' needs a number");
    }
    case Expr::Kind::Call: {
      const FuncDef *f = program_.find(e.name);
      std::vector<Value> args;
      args.reserve(e.operands.size());
      for (const auto &op : e.operands)
        args.push_back(eval(op, env));
      SourcePos saved = pos_;
      auto result = call(*f, std::move(args), pos_);
      pos_ = saved;
      if (!result)
        return Value(std::int64_t{0}); // void call in statement position
      return std::move(*result);
    }
    case Expr::Kind::Index: {
      Value base = eval(e.operands[0], env);
      Value idx = eval(e.operands[1], env);
      if (!base.is_list())
        fail(Kind::TypeMismatch, "only lists can be indexed");
      std::size_t i = checked_index(idx, base.as_list().size());
      return base.as_list()[i];
    }
    case Expr::Kind::Len: {
      Value v = eval(e.operands[0], env);
      if (v.is_list())
        return Value(static_cast<std::int64_t>(v.as_list().size()));
      if (v.is_str())
        return Value(static_cast<std::int64_t>(v.as_str().size()));
      fail(Kind::TypeMismatch, "len() needs a list or string");
    }
    case Expr::Kind::Hole:
      fail(Kind::TypeMismatch, "cannot evaluate a literal hole");
    }
    fail(Kind::TypeMismatch, "unknown expression");
  }

  static bool is_number(const Value &v) { return v.is_int() || v.is_float(); }
  static double to_double(const Value &v) {
    return v.is_int() ? static_cast<double>(v.as_int()) : v.as_float();
  }

  Value eval_binary(const Expr &e, Env &env) {
    BinaryOp op = e.binary_op;
    if (op == BinaryOp::And || op == BinaryOp::Or) {
      Value lhs = eval(e.operands[0], env);
      if (!lhs.is_bool())
        fail(Kind::TypeMismatch, "'" + std::string(op_spelling(op)) +
                                     "' needs bool operands");
      if (lhs.as_bool() == (op == BinaryOp::Or))
        return lhs;
      Value rhs = eval(e.operands[1], env);
      if (!rhs.is_bool())
        fail(Kind::TypeMismatch, "'" + std::string(op_spelling(op)) +
                                     "' needs bool operands");
      return rhs;
    }
    Value lhs = eval(e.operands[0], env);
    Value rhs = eval(e.operands[1], env);

    if (op == BinaryOp::Eq || op == BinaryOp::Ne) {
      bool eq;
      if (is_number(lhs) && is_number(rhs) && lhs.data.index() != rhs.data.index())
        eq = to_double(lhs) == to_double(rhs);
      else if (lhs.data.index() != rhs.data.index())
        fail(Kind::TypeMismatch, "cannot compare " +
                                     std::string(kind_name(lhs)) + " with " +
                                     std::string(kind_name(rhs)));
      else if (lhs.is_float())
        eq = lhs.as_float() == rhs.as_float();
      else
        eq = lhs == rhs;
      return Value(op == BinaryOp::Eq ? eq : !eq);
    }
    if (is_comparison(op)) {
      int cmp;
      if (lhs.is_int() && rhs.is_int())
        cmp = lhs.as_int() < rhs.as_int() ? -1 : lhs.as_int() > rhs.as_int();
      else if (is_number(lhs) && is_number(rhs)) {
        double a = to_double(lhs), b = to_double(rhs);
        cmp = a < b ? -1 : a > b;
      } else if (lhs.is_str() && rhs.is_str())
        cmp = lhs.as_str().compare(rhs.as_str());
      else
        fail(Kind::TypeMismatch, "cannot order " +
                                     std::string(kind_name(lhs)) + " and " +
                                     std::string(kind_name(rhs)));
      switch (op) {
      case BinaryOp::Lt:
        return Value(cmp < 0);
      case BinaryOp::Le:
        return Value(cmp <= 0);
      case BinaryOp::Gt:
        return Value(cmp > 0);
      default:
        return Value(cmp >= 0);
      }
    }

    if (op == BinaryOp::Add && lhs.is_str() && rhs.is_str())
      return Value(lhs.as_str() + rhs.as_str());
    if (op == BinaryOp::Add && lhs.is_list() && rhs.is_list()) {
      Value::List items = lhs.as_list();
      const auto &more = rhs.as_list();
      check_length(items.size() + more.size());
      items.insert(items.end(), more.begin(), more.end());
      check_homogeneous(items);
      return Value(std::move(items));
    }
    if (!is_number(lhs) || !is_number(rhs))
      fail(Kind::TypeMismatch, "operator '" + std::string(op_spelling(op)) +
                                   "' cannot combine " +
                                   std::string(kind_name(lhs)) + " and " +
                                   std::string(kind_name(rhs)));
    if (lhs.is_int() && rhs.is_int())
      return int_arith(op, lhs.as_int(), rhs.as_int());
    double a = to_double(lhs), b = to_double(rhs);
    switch (op) {
    case BinaryOp::Add:
      return Value(a + b);
    case BinaryOp::Sub:
      return Value(a - b);
    case BinaryOp::Mul:
      return Value(a * b);
    case BinaryOp::Div:
      if (b == 0.0)
        fail(Kind::DivisionByZero, "division by zero");
      return Value(a / b);
    default:
      fail(Kind::TypeMismatch, "'%' needs int operands");
    }
  }

  Value int_arith(BinaryOp op, std::int64_t a, std::int64_t b) const {
    std::int64_t r = 0;
    bool overflow = false;
    switch (op) {
    case BinaryOp::Add:
      overflow = __builtin_add_overflow(a, b, &r);
      break;
    case BinaryOp::Sub:
      overflow = __builtin_sub_overflow(a, b, &r);
      break;
    case BinaryOp::Mul:
      overflow = __builtin_mul_overflow(a, b, &r);
      break;
    case BinaryOp::Div:
    case BinaryOp::Mod:
      if (b == 0)
        fail(Kind::DivisionByZero, "division by zero");
      if (a == std::numeric_limits<std::int64_t>::min() && b == -1) {
        if (op == BinaryOp::Mod)
          return Value(std::int64_t{0});
        overflow = true;
        break;
      }
      // C++ truncates toward zero; '%' takes the dividend's sign.
      r = op == BinaryOp::Div ? a / b : a % b;
      break;
    default:
      break;
    }
    if (overflow)
      fail(Kind::IntOverflow, "integer overflow in '" +
                                  std::string(op_spelling(op)) + "'");
    return Value(r);
  }

  const Program &program_;
  const RunLimits &limits_;
  std::vector<std::string> &lines_;
  std::uint64_t steps_ = 0;
  SourcePos pos_;
};

} // namespace

void check_arguments(const Program &p, std::span<const Value> args) {
  const FuncDef &m = p.main();
  if (args.size() != m.params.size())
    throw RuntimeError(Kind::ArityMismatch, m.pos,
                       "main expects " + std::to_string(m.params.size()) +
                           " argument(s), got " + std::to_string(args.size()));
  for (std::size_t i = 0; i < args.size(); ++i)
    if (!conforms(args[i], m.params[i].type))
      throw RuntimeError(Kind::TypeMismatch, m.pos,
                         "argument '" + m.params[i].name + "' must be " +
                             std::string(type_name(m.params[i].type)) +
                             ", got " + std::string(kind_name(args[i])));
}

Trace run(const Program &p, std::span<const Value> args,
          const RunLimits &limits) {
  Trace t;
  Interpreter in(p, limits, t.lines);
  t.result = in.call(p.main(), std::vector<Value>(args.begin(), args.end()),
                     p.main().pos);
  return t;
}

RunOutcome run_captured(const Program &p, std::span<const Value> args,
                        const RunLimits &limits) {
  RunOutcome out;
  try {
    Interpreter in(p, limits, out.lines);
    out.end = in.call(p.main(), std::vector<Value>(args.begin(), args.end()),
                      p.main().pos);
  } catch (const RuntimeError &e) {
    out.end = e;
  }
  return out;
}

namespace {

std::string describe_end(const RunOutcome &o) {
  if (o.failed())
    return "error " + std::string(to_string(std::get<1>(o.end).kind()));
  const auto &r = std::get<0>(o.end);
  return r ? format_value(*r) : "void";
}

} // namespace

EquivalenceReport equivalent(const Program &a, const Program &b,
                             std::span<const InputTuple> inputs,
                             const RunLimits &limits) {
  EquivalenceReport report;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    RunOutcome x = run_captured(a, inputs[k], limits);
    RunOutcome y = run_captured(b, inputs[k], limits);
    if (x.failed() && y.failed() &&
        std::get<1>(x.end).kind() == std::get<1>(y.end).kind())
      continue;

    Divergence d;
    d.input_index = k;
    d.input = inputs[k];
    std::size_t common = std::min(x.lines.size(), y.lines.size());
    std::size_t i = 0;
    while (i < common && x.lines[i] == y.lines[i])
      ++i;
    if (i < common || x.lines.size() != y.lines.size()) {
      d.line = i;
      d.expected = i < x.lines.size() ? x.lines[i] : "<no line>";
      d.actual = i < y.lines.size() ? y.lines[i] : "<no line>";
    } else {
      bool same = !x.failed() && !y.failed() &&
                  std::get<0>(x.end) == std::get<0>(y.end);
      if (same)
        continue;
      d.expected = describe_end(x);
      d.actual = describe_end(y);
    }
    report.equivalent = false;
    report.first_divergence = std::move(d);
    return report;
  }
  return report;
}

} // namespace decomplab
