#include "decomplab/transform/transform.hpp"

#include "decomplab/lang/printer.hpp"

#include <algorithm>
#include <optional>

namespace decomplab {

TransformError::TransformError(Kind kind, const std::string &message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind) {}

std::string_view to_string(TransformError::Kind kind) noexcept {
  switch (kind) {
  case TransformError::Kind::NotCallNormal:
    return "NotCallNormal";
  case TransformError::Kind::NonTailReturn:
    return "NonTailReturn";
  case TransformError::Kind::IntOverflow:
    return "IntOverflow";
  case TransformError::Kind::NotATemplate:
    return "NotATemplate";
  case TransformError::Kind::ScaleMismatch:
    return "ScaleMismatch";
  case TransformError::Kind::NameCollision:
    return "NameCollision";
  case TransformError::Kind::OnlyOneOrder:
    return "OnlyOneOrder";
  case TransformError::Kind::NoCommonComputation:
    return "NoCommonComputation";
  }
  return "TransformError";
}

namespace {

bool is_affine_op(BinaryOp op) {
  return op == BinaryOp::Add || op == BinaryOp::Sub || op == BinaryOp::Mul;
}

std::optional<std::int64_t> apply(BinaryOp op, std::int64_t a,
                                  std::int64_t b) {
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
  default:
    return std::nullopt;
  }
  if (overflow)
    return std::nullopt;
  return r;
}

void fold_in_place(Expr &e) {
  for (auto &op : e.operands)
    fold_in_place(op);
  if (e.kind != Expr::Kind::Binary || !is_affine_op(e.binary_op))
    return;
  const Expr &l = e.operands[0];
  const Expr &r = e.operands[1];
  if (l.kind != Expr::Kind::IntLit || r.kind != Expr::Kind::IntLit)
    return;
  auto v = apply(e.binary_op, l.int_value, r.int_value);
  if (!v)
    throw TransformError(TransformError::Kind::IntOverflow,
                         "folding " + pretty_print(e));
  e = Expr::int_lit(*v, e.pos);
}

struct Poly {
  int degree = 0;
  std::int64_t a = 0;
  std::int64_t b = 0;
};

[[noreturn]] void not_template(const std::string &why) {
  throw TransformError(TransformError::Kind::NotATemplate, why);
}

/// Polynomial of a {+,-,*} subtree over int literals and `s`; nullopt if the
/// subtree contains anything else.
std::optional<Poly> poly_of(const Expr &e, const std::string &s) {
  switch (e.kind) {
  case Expr::Kind::IntLit:
    return Poly{0, 0, e.int_value};
  case Expr::Kind::Var:
    if (e.name == s)
      return Poly{1, 1, 0};
    return std::nullopt;
  case Expr::Kind::Binary: {
    if (!is_affine_op(e.binary_op))
      return std::nullopt;
    auto l = poly_of(e.operands[0], s);
    auto r = poly_of(e.operands[1], s);
    if (!l || !r)
      return std::nullopt;
    auto checked = [](std::optional<std::int64_t> v) {
      if (!v)
        not_template("coefficient overflow");
      return *v;
    };
    if (e.binary_op == BinaryOp::Mul) {
      if (l->degree && r->degree)
        not_template("scale parameter multiplied by itself");
      return Poly{l->degree + r->degree,
                  checked(apply(BinaryOp::Add,
                                checked(apply(BinaryOp::Mul, l->a, r->b)),
                                checked(apply(BinaryOp::Mul, l->b, r->a)))),
                  checked(apply(BinaryOp::Mul, l->b, r->b))};
    }
    return Poly{std::max(l->degree, r->degree),
                checked(apply(e.binary_op, l->a, r->a)),
                checked(apply(e.binary_op, l->b, r->b))};
  }
  default:
    return std::nullopt;
  }
}

bool mentions(const Expr &e, const std::string &name) {
  bool found = false;
  for_each_expr(e, [&](const Expr &x) {
    found = found || (x.kind == Expr::Kind::Var && x.name == name);
  });
  return found;
}

void collect_sites(const Expr &e, const std::string &s,
                   std::vector<AffineSite> &out) {
  if (auto poly = poly_of(e, s)) {
    if (mentions(e, s))
      out.push_back({poly->a, poly->b});
    return;
  }
  for (const auto &op : e.operands)
    collect_sites(op, s, out);
}

void substitute(Expr &e, const std::string &name, std::int64_t value) {
  for_each_expr(e, [&](Expr &x) {
    if (x.kind == Expr::Kind::Var && x.name == name)
      x = Expr::int_lit(value, x.pos);
  });
}

} // namespace

Expr fold_affine(const Expr &e) {
  Expr out = e;
  fold_in_place(out);
  return out;
}

std::vector<Stmt> fold_affine(std::span<const Stmt> stmts) {
  std::vector<Stmt> out(stmts.begin(), stmts.end());
  for_each_stmt(std::span<Stmt>(out), [](Stmt &s) {
    for (auto &e : s.exprs)
      fold_in_place(e);
  });
  return out;
}

Program fold_affine(const Program &p) {
  Program out = p;
  for (auto &f : out.functions)
    f.body = fold_affine(f.body);
  return out;
}

ScaledTemplate make_template(const FuncDef &f, std::string_view scale_param) {
  ScaledTemplate t;
  t.base = f;
  t.scale_param = std::string(scale_param);
  bool declared = false;
  for (const auto &prm : f.params)
    if (prm.name == scale_param) {
      if (prm.type != Type::Int)
        not_template("scale parameter '" + t.scale_param + "' is not an int");
      declared = true;
    }
  if (!declared)
    not_template("'" + t.scale_param + "' is not a parameter of " + f.name);
  for_each_stmt(f.body, [&](const Stmt &s) {
    if ((s.kind == Stmt::Kind::Assign || s.kind == Stmt::Kind::IndexAssign ||
         s.kind == Stmt::Kind::ForRange) &&
        s.target == t.scale_param)
      not_template("scale parameter is assigned");
    for (const auto &e : s.exprs)
      collect_sites(e, t.scale_param, t.sites);
  });
  if (t.sites.empty())
    not_template("scale parameter is never used");
  return t;
}

std::optional<std::string> find_scale_param(const FuncDef &f) {
  for (const auto &prm : f.params) {
    if (prm.type != Type::Int)
      continue;
    try {
      make_template(f, prm.name);
      return prm.name;
    } catch (const TransformError &) {
    }
  }
  return std::nullopt;
}

std::vector<Stmt> instantiate_template(const ScaledTemplate &t,
                                       std::int64_t s) {
  std::vector<Stmt> body = t.base.body;
  for_each_stmt(std::span<Stmt>(body), [&](Stmt &st) {
    for (auto &e : st.exprs)
      substitute(e, t.scale_param, s);
  });
  return fold_affine(body);
}

} // namespace decomplab
