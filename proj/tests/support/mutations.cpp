#include "mutations.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace decomplab::testing {

namespace {

void each_var(Program &p, const std::function<void(std::string &)> &fn) {
  FuncDef &main = p.main();
  for (Param &param : main.params)
    fn(param.name);
  for_each_stmt(std::span<Stmt>(main.body), [&](Stmt &s) {
    if (s.kind == Stmt::Kind::Assign || s.kind == Stmt::Kind::IndexAssign ||
        s.kind == Stmt::Kind::ForRange)
      fn(s.target);
    for_each_own_expr(s, [&](Expr &v) {
      if (v.kind == Expr::Kind::Var)
        fn(v.name);
    });
  });
}

} // namespace

std::map<std::string, std::string> rename_variables(Program &p,
                                                    std::uint64_t seed) {
  std::set<std::string> names;
  each_var(p, [&](std::string &n) { names.insert(n); });
  std::vector<std::string> fresh;
  for (std::size_t k = 0; k < names.size(); ++k)
    fresh.push_back("w" + std::to_string(k));
  std::shuffle(fresh.begin(), fresh.end(), std::mt19937_64(seed));
  std::map<std::string, std::string> mapping;
  std::size_t k = 0;
  for (const std::string &n : names)
    mapping[n] = fresh[k++];
  each_var(p, [&](std::string &n) { n = mapping.at(n); });
  return mapping;
}

bool perturb_literal(Program &p, const TaskAnnotation &ann, int task,
                     int instance) {
  bool done = false;
  for_each_stmt(std::span<Stmt>(p.main().body), [&](Stmt &s) {
    if (done || ann.task_of.at(s.id) != task)
      return;
    auto it = ann.instance_of.find(s.id);
    if (it == ann.instance_of.end() || it->second != instance)
      return;
    for_each_own_expr(s, [&](Expr &lit) {
      if (done)
        return;
      switch (lit.kind) {
      case Expr::Kind::IntLit:
        ++lit.int_value;
        break;
      case Expr::Kind::FloatLit:
        lit.float_value += 1.0;
        break;
      case Expr::Kind::StrLit:
        lit.name += "!";
        break;
      case Expr::Kind::BoolLit:
        lit.bool_value = !lit.bool_value;
        break;
      default:
        return;
      }
      done = true;
    });
  });
  return done;
}

int drop_consumer(Program &p, const TaskAnnotation &ann, StmtId def,
                  const std::string &var, int task) {
  Expr value;
  for_each_stmt(std::span<Stmt>(p.main().body), [&](Stmt &s) {
    if (s.id == def)
      value = s.exprs.at(0);
  });
  int rewritten = 0;
  for_each_stmt(std::span<Stmt>(p.main().body), [&](Stmt &s) {
    if (ann.task_of.at(s.id) != task)
      return;
    bool touched = false;
    for_each_own_expr(s, [&](Expr &v) {
      if (v.kind == Expr::Kind::Var && v.name == var) {
        v = value;
        touched = true;
      }
    });
    rewritten += touched;
  });
  return rewritten;
}

} // namespace decomplab::testing
