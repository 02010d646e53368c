#include "decomplab/analysis/analysis.hpp"

#include "decomplab/lang/printer.hpp"

#include <algorithm>
#include <stdexcept>

namespace decomplab {

AnalysisError::AnalysisError(Kind kind, const std::string &message,
                             std::optional<StmtId> stmt)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind), stmt_(stmt) {}

std::string_view to_string(AnalysisError::Kind kind) noexcept {
  switch (kind) {
  case AnalysisError::Kind::UnboundVariable:
    return "UnboundVariable";
  case AnalysisError::Kind::AnnotationIncomplete:
    return "AnnotationIncomplete";
  case AnalysisError::Kind::AnnotationInvalid:
    return "AnnotationInvalid";
  }
  return "AnalysisError";
}

std::string_view to_string(DepKind kind) noexcept {
  switch (kind) {
  case DepKind::Flow:
    return "flow";
  case DepKind::Anti:
    return "anti";
  case DepKind::Output:
    return "output";
  case DepKind::Console:
    return "console";
  }
  return "?";
}

std::map<StmtId, const Stmt *> index_main(const Program &p) {
  std::map<StmtId, const Stmt *> out;
  for_each_stmt(p.main().body, [&](const Stmt &s) { out[s.id] = &s; });
  return out;
}

//===----------------------------------------------------------------------===//
// Def/use
//===----------------------------------------------------------------------===//

namespace {

void vars_of(const Expr &e, std::set<std::string> &out) {
  for_each_expr(e, [&](const Expr &x) {
    if (x.kind == Expr::Kind::Var)
      out.insert(x.name);
  });
}

} // namespace

DefUse collect_def_use(const Program &p) {
  DefUse du;
  for_each_stmt(p.main().body, [&](const Stmt &s) {
    auto &defs = du.defs[s.id];
    auto &uses = du.uses[s.id];
    for (const auto &e : s.exprs)
      vars_of(e, uses);
    switch (s.kind) {
    case Stmt::Kind::Assign:
    case Stmt::Kind::ForRange:
      defs.insert(s.target);
      break;
    case Stmt::Kind::IndexAssign:
      defs.insert(s.target);
      uses.insert(s.target);
      break;
    default:
      break;
    }
  });
  return du;
}

DefUse compute_def_use(const Program &p) {
  DefUse du = collect_def_use(p);
  ReachingDefs rd = reaching_definitions(p, du);
  for (const auto &[id, vars] : du.uses)
    for (const auto &v : vars) {
      auto it = rd.find({id, v});
      if (it == rd.end() || it->second.empty())
        throw AnalysisError(AnalysisError::Kind::UnboundVariable,
                            "'" + v + "' is used by statement " +
                                std::to_string(to_int(id)) +
                                " before any definition",
                            id);
    }
  return du;
}

//===----------------------------------------------------------------------===//
// Reaching definitions
//===----------------------------------------------------------------------===//

namespace {

/// Statement-level CFG. Statements of main are numbered densely in program
/// order; two extra nodes model entry and exit.
struct Cfg {
  std::size_t entry = 0;
  std::size_t exit = 0;
  std::vector<std::vector<std::size_t>> succ;
  std::map<StmtId, std::size_t> index;

  std::size_t node(StmtId id) const { return index.at(id); }

  /// Wires `stmts` so control continues at `follow`; returns the first node.
  std::size_t wire(std::span<const Stmt> stmts, std::size_t follow) {
    std::size_t next = follow;
    for (auto it = stmts.rbegin(); it != stmts.rend(); ++it) {
      const Stmt &s = *it;
      std::size_t n = node(s.id);
      switch (s.kind) {
      case Stmt::Kind::Return:
        succ[n] = {exit};
        break;
      case Stmt::Kind::If:
        succ[n] = {wire(s.body, next), wire(s.orelse, next)};
        break;
      case Stmt::Kind::While:
      case Stmt::Kind::ForRange:
        succ[n] = {wire(s.body, n), next};
        break;
      default:
        succ[n] = {next};
        break;
      }
      next = n;
    }
    return next;
  }
};

} // namespace

ReachingIn reaching_in(const Program &p, const DefUse &du) {
  const FuncDef &main = p.main();
  std::size_t n_stmts = count_stmts(main.body);
  Cfg cfg;
  cfg.entry = n_stmts;
  cfg.exit = n_stmts + 1;
  cfg.succ.resize(n_stmts + 2);
  for_each_stmt(main.body, [&](const Stmt &s) {
    if (!cfg.index.emplace(s.id, cfg.index.size()).second)
      throw std::invalid_argument("duplicate statement id in main");
  });
  cfg.succ[cfg.entry] = {cfg.wire(main.body, cfg.exit)};

  using Def = std::pair<std::string, StmtId>;
  std::vector<std::set<Def>> gen(n_stmts + 2);
  std::vector<std::set<std::string>> killed(n_stmts + 2);
  for (const auto &prm : main.params) {
    gen[cfg.entry].insert({prm.name, kEntryDef});
    killed[cfg.entry].insert(prm.name);
  }
  for (const auto &[id, vars] : du.defs) {
    std::size_t n = cfg.node(id);
    for (const auto &v : vars) {
      gen[n].insert({v, id});
      killed[n].insert(v);
    }
  }

  std::vector<std::vector<std::size_t>> pred(n_stmts + 2);
  for (std::size_t n = 0; n < cfg.succ.size(); ++n)
    for (std::size_t s : cfg.succ[n])
      pred[s].push_back(n);

  std::vector<std::set<Def>> in(n_stmts + 2), out(n_stmts + 2);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t n = 0; n < n_stmts + 2; ++n) {
      std::set<Def> new_in;
      for (std::size_t q : pred[n])
        new_in.insert(out[q].begin(), out[q].end());
      std::set<Def> new_out = gen[n];
      for (const auto &d : new_in)
        if (!killed[n].count(d.first))
          new_out.insert(d);
      if (new_in != in[n] || new_out != out[n]) {
        in[n] = std::move(new_in);
        out[n] = std::move(new_out);
        changed = true;
      }
    }
  }

  ReachingIn result;
  for_each_stmt(main.body, [&](const Stmt &s) {
    auto &slot = result[s.id];
    for (const auto &[var, def] : in[cfg.node(s.id)])
      slot[var].insert(def);
  });
  return result;
}

ReachingDefs reaching_definitions(const Program &p, const DefUse &du) {
  ReachingIn in = reaching_in(p, du);
  ReachingDefs rd;
  for (const auto &[id, vars] : du.uses) {
    const auto &reaching = in[id];
    for (const auto &v : vars) {
      auto &slot = rd[{id, v}];
      if (auto it = reaching.find(v); it != reaching.end())
        slot = it->second;
    }
  }
  return rd;
}

//===----------------------------------------------------------------------===//
// Dependency graph
//===----------------------------------------------------------------------===//

DepGraph build_dep_graph(const Program &p, const DefUse &du) {
  DepGraph g;
  std::vector<StmtId> prints;
  for_each_stmt(p.main().body, [&](const Stmt &s) {
    g.nodes.push_back(s.id);
    if (s.kind == Stmt::Kind::Print)
      prints.push_back(s.id);
  });

  ReachingDefs rd = reaching_definitions(p, du);
  for (const auto &[key, defs] : rd) {
    const auto &[use, var] = key;
    for (StmtId d : defs)
      if (d != kEntryDef && d < use)
        g.edges.insert({d, use, DepKind::Flow, var});
  }

  auto get = [](const std::map<StmtId, std::set<std::string>> &m, StmtId id)
      -> const std::set<std::string> & {
    static const std::set<std::string> kEmpty;
    auto it = m.find(id);
    return it == m.end() ? kEmpty : it->second;
  };
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    StmtId a = g.nodes[i];
    for (std::size_t j = i + 1; j < g.nodes.size(); ++j) {
      StmtId b = g.nodes[j];
      const auto &b_defs = get(du.defs, b);
      for (const auto &v : get(du.uses, a))
        if (b_defs.count(v))
          g.edges.insert({a, b, DepKind::Anti, v});
      for (const auto &v : get(du.defs, a))
        if (b_defs.count(v))
          g.edges.insert({a, b, DepKind::Output, v});
    }
  }
  for (std::size_t i = 1; i < prints.size(); ++i)
    g.edges.insert({prints[i - 1], prints[i], DepKind::Console, ""});
  return g;
}

//===----------------------------------------------------------------------===//
// Regions
//===----------------------------------------------------------------------===//

void check_annotation(const Program &p, const TaskAnnotation &ann) {
  auto index = index_main(p);
  for (const auto &[id, stmt] : index)
    if (!ann.task_of.count(id))
      throw AnalysisError(AnalysisError::Kind::AnnotationIncomplete,
                          "statement " + std::to_string(to_int(id)) +
                              " has no task",
                          id);
  for (const auto &[id, task] : ann.task_of) {
    if (!index.count(id))
      throw AnalysisError(AnalysisError::Kind::AnnotationInvalid,
                          "annotation names unknown statement " +
                              std::to_string(to_int(id)),
                          id);
    if (task < 0)
      throw AnalysisError(AnalysisError::Kind::AnnotationInvalid,
                          "negative task id", id);
  }
  std::map<int, std::set<int>> instances;
  for (const auto &[id, inst] : ann.instance_of) {
    auto it = ann.task_of.find(id);
    if (it == ann.task_of.end())
      throw AnalysisError(AnalysisError::Kind::AnnotationInvalid,
                          "instance given for unknown statement " +
                              std::to_string(to_int(id)),
                          id);
    instances[it->second].insert(inst);
  }
  for (const auto &[task, ids] : instances) {
    int expect = 0;
    for (int i : ids)
      if (i != expect++)
        throw AnalysisError(AnalysisError::Kind::AnnotationInvalid,
                            "instance ids of task " + std::to_string(task) +
                                " are not 0..k-1");
  }
}

RegionInfo regions(const Program &p, const TaskAnnotation &ann) {
  check_annotation(p, ann);
  RegionInfo r;
  std::function<void(std::span<const Stmt>, std::optional<StmtId>)> walk =
      [&](std::span<const Stmt> stmts, std::optional<StmtId> parent) {
        for (const auto &s : stmts) {
          if (parent)
            r.owner[s.id] = *parent;
          walk(s.body, s.id);
          walk(s.orelse, s.id);
        }
      };
  walk(p.main().body, std::nullopt);
  for (const auto &[id, task] : ann.task_of) {
    auto [it, fresh] = r.interval.try_emplace(task, id, id);
    if (!fresh) {
      it->second.first = std::min(it->second.first, id);
      it->second.second = std::max(it->second.second, id);
    }
  }
  return r;
}

bool nested_in(const RegionInfo &r, StmtId inner, StmtId outer) {
  auto it = r.owner.find(inner);
  while (it != r.owner.end()) {
    if (it->second == outer)
      return true;
    it = r.owner.find(it->second);
  }
  return false;
}

//===----------------------------------------------------------------------===//
// Literal abstraction
//===----------------------------------------------------------------------===//

AbstractedStmts abstract_literals(std::span<const Stmt> stmts) {
  AbstractedStmts out;
  out.shape.assign(stmts.begin(), stmts.end());
  for_each_stmt(std::span<Stmt>(out.shape), [&](Stmt &s) {
    for_each_own_expr(s, [&](Expr &e) {
      switch (e.kind) {
      case Expr::Kind::IntLit:
        out.literals.emplace_back(e.int_value);
        break;
      case Expr::Kind::FloatLit:
        out.literals.emplace_back(e.float_value);
        break;
      case Expr::Kind::BoolLit:
        out.literals.emplace_back(e.bool_value);
        break;
      case Expr::Kind::StrLit:
        out.literals.emplace_back(e.name);
        break;
      default:
        return;
      }
      e = Expr::hole(e.pos);
    });
  });
  return out;
}

std::vector<Stmt> fill_holes(std::span<const Stmt> shape,
                             std::span<const Literal> literals) {
  std::vector<Stmt> out(shape.begin(), shape.end());
  std::size_t next = 0;
  for_each_stmt(std::span<Stmt>(out), [&](Stmt &s) {
    for_each_own_expr(s, [&](Expr &e) {
      if (e.kind != Expr::Kind::Hole)
        return;
      if (next >= literals.size())
        throw std::invalid_argument("more holes than literals");
      SourcePos pos = e.pos;
      e = std::visit(
          [&](const auto &v) -> Expr {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::int64_t>)
              return Expr::int_lit(v, pos);
            else if constexpr (std::is_same_v<T, double>)
              return Expr::float_lit(v, pos);
            else if constexpr (std::is_same_v<T, bool>)
              return Expr::bool_lit(v, pos);
            else
              return Expr::str_lit(v, pos);
          },
          literals[next++]);
    });
  });
  if (next != literals.size())
    throw std::invalid_argument("more literals than holes");
  return out;
}

std::string format_literal(const Literal &lit) {
  return std::visit(
      [](const auto &v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::int64_t>)
          return std::to_string(v);
        else if constexpr (std::is_same_v<T, double>)
          return float_literal_text(v);
        else if constexpr (std::is_same_v<T, bool>)
          return v ? "true" : "false";
        else
          return "\"" + v + "\"";
      },
      lit);
}

} // namespace decomplab
