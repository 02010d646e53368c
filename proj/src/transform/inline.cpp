#include "decomplab/transform/transform.hpp"

#include <map>
#include <set>

namespace decomplab {

bool Provenance::has_scales(int task) const {
  for (const auto &inst : instances)
    if (inst.task == task && inst.scale)
      return true;
  return false;
}

CallNormalReport check_call_normal(const Program &p) {
  CallNormalReport report;
  for (const auto &f : p.functions) {
    bool is_main = f.name == "main";
    for_each_stmt(f.body, [&](const Stmt &s) {
      for (const auto &root : s.exprs)
        for_each_expr(root, [&](const Expr &e) {
          if (e.kind != Expr::Kind::Call)
            return;
          bool whole = &e == &s.exprs[0] &&
                       (s.kind == Stmt::Kind::ExprStmt ||
                        s.kind == Stmt::Kind::Assign);
          if (is_main && whole)
            return;
          report.ok = false;
          report.diagnostics.push_back(
              {f.name, e.pos,
               is_main ? "call to " + e.name +
                             " is not a whole statement or right-hand side"
                       : "call to " + e.name + " outside main"});
        });
    });
  }
  return report;
}

namespace {

/// The call made by a call-normal statement of main, if any.
const Expr *call_of(const Stmt &s) {
  if ((s.kind == Stmt::Kind::ExprStmt || s.kind == Stmt::Kind::Assign) &&
      s.exprs[0].kind == Expr::Kind::Call)
    return &s.exprs[0];
  return nullptr;
}

std::set<std::string> variables_of(std::span<const Stmt> body) {
  std::set<std::string> vars;
  for_each_stmt(body, [&](const Stmt &s) {
    if (s.kind == Stmt::Kind::Assign || s.kind == Stmt::Kind::IndexAssign ||
        s.kind == Stmt::Kind::ForRange)
      vars.insert(s.target);
    for (const auto &e : s.exprs)
      for_each_expr(e, [&](const Expr &x) {
        if (x.kind == Expr::Kind::Var)
          vars.insert(x.name);
      });
  });
  return vars;
}

void rename_all(std::vector<Stmt> &body, const std::string &prefix) {
  for_each_stmt(std::span<Stmt>(body), [&](Stmt &s) {
    if (s.kind == Stmt::Kind::Assign || s.kind == Stmt::Kind::IndexAssign ||
        s.kind == Stmt::Kind::ForRange)
      s.target = prefix + s.target;
    for (auto &e : s.exprs)
      for_each_expr(e, [&](Expr &x) {
        if (x.kind == Expr::Kind::Var)
          x.name = prefix + x.name;
      });
  });
}

bool surely_float(const Expr &e, const std::set<std::string> &floats) {
  switch (e.kind) {
  case Expr::Kind::FloatLit:
    return true;
  case Expr::Kind::Var:
    return floats.count(e.name) > 0;
  case Expr::Kind::Unary:
    return e.unary_op == UnaryOp::Neg && surely_float(e.operands[0], floats);
  case Expr::Kind::Binary:
    switch (e.binary_op) {
    case BinaryOp::Add:
    case BinaryOp::Sub:
    case BinaryOp::Mul:
    case BinaryOp::Div:
      return surely_float(e.operands[0], floats) ||
             surely_float(e.operands[1], floats);
    default:
      return false;
    }
  default:
    return false;
  }
}

/// Variables of `f` that hold a float wherever they are defined. Float
/// parameters count because the call boundary converts ints.
std::set<std::string> float_vars(const Program &ref, const FuncDef &f,
                                 std::span<const Stmt> body) {
  std::set<std::string> floats, others;
  for (const auto &prm : f.params)
    (prm.type == Type::Float ? floats : others).insert(prm.name);
  for_each_stmt(body, [&](const Stmt &s) {
    if (s.kind == Stmt::Kind::Assign && !others.count(s.target))
      floats.insert(s.target);
  });
  for (bool changed = true; changed;) {
    changed = false;
    for_each_stmt(body, [&](const Stmt &s) {
      if (!floats.count(s.target))
        return;
      bool ok = false;
      if (s.kind == Stmt::Kind::Assign) {
        const Expr &rhs = s.exprs[0];
        const FuncDef *callee =
            rhs.kind == Expr::Kind::Call ? ref.find(rhs.name) : nullptr;
        ok = callee ? callee->return_type == Type::Float
                    : surely_float(rhs, floats);
      } else if (s.kind != Stmt::Kind::ForRange &&
                 s.kind != Stmt::Kind::IndexAssign) {
        return;
      }
      if (!ok) {
        floats.erase(s.target);
        changed = true;
      }
    });
  }
  return floats;
}

/// `e`, converted to float at run time unless it is one already. Multiplying
/// by 1.0 is exact and keeps the sign of zero.
Expr as_float(Expr e, const std::set<std::string> &floats) {
  if (e.kind == Expr::Kind::IntLit)
    return Expr::float_lit(static_cast<double>(e.int_value), e.pos);
  if (surely_float(e, floats))
    return e;
  SourcePos pos = e.pos;
  return Expr::binary(BinaryOp::Mul, std::move(e), Expr::float_lit(1.0, pos),
                      pos);
}

struct Tag {
  int task = kGlueTask;
  int instance = -1;
};

class Inliner {
public:
  Inliner(const Program &ref, bool scaled) : ref_(ref), scaled_(scaled) {}

  GenerateResult run() {
    CallNormalReport normal = check_call_normal(ref_);
    if (!normal.ok) {
      const auto &d = normal.diagnostics.front();
      throw TransformError(TransformError::Kind::NotCallNormal,
                           d.function + " at " + std::to_string(d.pos.line) +
                               ":" + std::to_string(d.pos.column) + ": " +
                               d.message);
    }
    const FuncDef &main = ref_.main();
    for_each_stmt(main.body, [&](const Stmt &s) {
      if (const Expr *c = call_of(s)) {
        ++call_count_[c->name];
        if (!task_of_fn_.count(c->name)) {
          int id = static_cast<int>(task_of_fn_.size()) + 1;
          task_of_fn_[c->name] = id;
          result_.annotation.task_names[id] = c->name;
        }
      }
    });
    main_vars_ = variables_of(main.body);
    main_floats_ = float_vars(ref_, main, main.body);
    for (const auto &prm : main.params)
      main_vars_.insert(prm.name);
    if (scaled_)
      find_templates();

    FuncDef out_main;
    out_main.name = main.name;
    out_main.params = main.params;
    out_main.return_type = main.return_type;
    out_main.pos = main.pos;
    out_main.body = rebuild(main.body);
    result_.unstructured.functions.push_back(std::move(out_main));

    std::vector<StmtId> previous = renumber(result_.unstructured);
    for (std::size_t i = 0; i < previous.size(); ++i) {
      StmtId id{static_cast<std::int32_t>(i)};
      const Tag &tag = tags_[static_cast<std::size_t>(to_int(previous[i]))];
      result_.annotation.task_of[id] = tag.task;
      if (tag.instance >= 0)
        result_.annotation.instance_of[id] = tag.instance;
    }
    result_.provenance.scaled = scaled_;
    return std::move(result_);
  }

private:
  void find_templates() {
    // A callee is instantiated as a template only if every call passes a
    // non-negative integer literal for the scale parameter.
    std::map<std::string, bool> literal_everywhere;
    std::map<std::string, std::string> param;
    for (const auto &[name, count] : call_count_) {
      auto scale = find_scale_param(*ref_.find(name));
      if (scale) {
        param[name] = *scale;
        literal_everywhere[name] = true;
      }
    }
    for_each_stmt(ref_.main().body, [&](const Stmt &s) {
      const Expr *c = call_of(s);
      if (!c || !param.count(c->name))
        return;
      const FuncDef &f = *ref_.find(c->name);
      for (std::size_t k = 0; k < f.params.size(); ++k)
        if (f.params[k].name == param[c->name]) {
          const Expr &arg = c->operands[k];
          if (arg.kind != Expr::Kind::IntLit || arg.int_value < 0)
            literal_everywhere[c->name] = false;
        }
    });
    for (const auto &[name, ok] : literal_everywhere)
      if (ok)
        templates_.emplace(name, make_template(*ref_.find(name), param[name]));
  }

  StmtId fresh(Tag tag) {
    tags_.push_back(tag);
    return StmtId{static_cast<std::int32_t>(tags_.size() - 1)};
  }

  std::vector<Stmt> rebuild(std::span<const Stmt> stmts) {
    std::vector<Stmt> out;
    for (const auto &s : stmts) {
      if (const Expr *c = call_of(s)) {
        auto expanded = expand(s, *c);
        for (auto &e : expanded)
          out.push_back(std::move(e));
        continue;
      }
      Stmt copy = s;
      copy.id = fresh({});
      copy.body = rebuild(s.body);
      copy.orelse = rebuild(s.orelse);
      out.push_back(std::move(copy));
    }
    return out;
  }

  std::vector<Stmt> expand(const Stmt &site, const Expr &call) {
    const FuncDef &f = *ref_.find(call.name);
    int task = task_of_fn_.at(call.name);
    int instance = next_instance_[call.name]++;
    std::string prefix =
        "t" + std::to_string(task) + "_" + std::to_string(instance) + "_";

    auto tmpl = templates_.find(call.name);
    std::optional<std::int64_t> scale;
    std::vector<Stmt> out;
    for (std::size_t k = 0; k < f.params.size(); ++k) {
      const Param &prm = f.params[k];
      Expr arg = call.operands[k];
      if (tmpl != templates_.end() && prm.name == tmpl->second.scale_param) {
        scale = arg.int_value;
        result_.provenance.scales.push_back(arg.int_value);
        continue;
      }
      if (prm.type == Type::Float)
        arg = as_float(std::move(arg), main_floats_);
      out.push_back(Stmt::assign(prefix + prm.name, std::move(arg), site.pos));
    }

    std::vector<Stmt> body = scale ? instantiate_template(tmpl->second, *scale)
                                   : f.body;
    for (std::size_t i = 0; i < body.size(); ++i) {
      bool tail = i + 1 == body.size();
      bool bad = false;
      for_each_stmt(std::span<const Stmt>(&body[i], 1), [&](const Stmt &s) {
        if (s.kind == Stmt::Kind::Return && !(tail && &s == &body[i]))
          bad = true;
      });
      if (bad)
        throw TransformError(TransformError::Kind::NonTailReturn,
                             f.name + " returns before its last statement");
    }

    std::set<std::string> vars = variables_of(body);
    for (const auto &prm : f.params)
      if (!scale || prm.name != tmpl->second.scale_param)
        vars.insert(prm.name);
    std::string ret = "ret";
    while (vars.count(ret))
      ret += "_";

    if (f.return_type == Type::Float && !body.empty() &&
        body.back().kind == Stmt::Kind::Return && !body.back().exprs.empty())
      body.back().exprs[0] = as_float(std::move(body.back().exprs[0]),
                                      float_vars(ref_, f, body));
    rename_all(body, prefix);
    if (!body.empty() && body.back().kind == Stmt::Kind::Return) {
      Stmt last = std::move(body.back());
      body.pop_back();
      if (!last.exprs.empty())
        body.push_back(
            Stmt::assign(prefix + ret, std::move(last.exprs[0]), last.pos));
    }
    for (auto &s : body)
      out.push_back(std::move(s));
    if (site.kind == Stmt::Kind::Assign)
      out.push_back(
          Stmt::assign(site.target, Expr::var(prefix + ret), site.pos));

    for (const auto &v : vars)
      record_rename(task, instance, v, prefix + v);
    record_rename(task, instance, "return", prefix + ret);

    Tag tag{task, call_count_.at(call.name) >= 2 ? instance : -1};
    for_each_stmt(std::span<Stmt>(out), [&](Stmt &s) { s.id = fresh(tag); });
    result_.provenance.instances.push_back({task, instance, f.name, scale});
    return out;
  }

  void record_rename(int task, int instance, const std::string &original,
                     const std::string &renamed) {
    if (main_vars_.count(renamed))
      throw TransformError(TransformError::Kind::NameCollision,
                           "'" + renamed + "' already names a variable of main");
    result_.provenance.renames.push_back({task, instance, original, renamed});
  }

  const Program &ref_;
  bool scaled_;
  GenerateResult result_;
  std::map<std::string, int> call_count_;
  std::map<std::string, int> task_of_fn_;
  std::map<std::string, int> next_instance_;
  std::map<std::string, ScaledTemplate> templates_;
  std::set<std::string> main_vars_;
  std::set<std::string> main_floats_;
  std::vector<Tag> tags_;
};

} // namespace

GenerateResult inline_all(const Program &reference, bool scaled) {
  return Inliner(reference, scaled).run();
}

GenerateResult generate(const Program &reference, const GenerateOptions &opt) {
  GenerateResult r = inline_all(reference, opt.scales.has_value());
  if (opt.scales && r.provenance.scales != *opt.scales)
    throw TransformError(TransformError::Kind::ScaleMismatch,
                         "requested scales differ from the template calls");
  if (opt.hoist) {
    HoistResult h = hoist_common(r.unstructured, r.annotation);
    r.unstructured = std::move(h.program);
    r.annotation = std::move(h.annotation);
    r.provenance.hoisted = true;
  }
  if (opt.reorder_seed) {
    DepGraph g =
        build_dep_graph(r.unstructured, compute_def_use(r.unstructured));
    ReorderResult rr = reorder(r.unstructured, g, *opt.reorder_seed);
    r.annotation = remap_annotation(r.annotation, rr.previous_ids);
    r.unstructured = std::move(rr.program);
    r.provenance.reorder_seed = opt.reorder_seed;
    r.provenance.permutation = std::move(rr.permutation);
  }
  return r;
}

GenerateResult replay(const Program &reference, const Provenance &prov) {
  GenerateOptions opt;
  if (prov.scaled)
    opt.scales = prov.scales;
  opt.hoist = prov.hoisted;
  opt.reorder_seed = prov.reorder_seed;
  return generate(reference, opt);
}

} // namespace decomplab
