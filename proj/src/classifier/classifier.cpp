#include "decomplab/classifier/classifier.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace decomplab {

ClassifyError::ClassifyError(Kind kind, const std::string &message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind) {}

std::string_view to_string(ClassifyError::Kind kind) noexcept {
  switch (kind) {
  case ClassifyError::Kind::InstanceShapeMismatch:
    return "InstanceShapeMismatch";
  case ClassifyError::Kind::AnnotationIncomplete:
    return "AnnotationIncomplete";
  case ClassifyError::Kind::AnalysisFailed:
    return "AnalysisFailed";
  }
  return "ClassifyError";
}

std::string_view to_string(Relation r) noexcept {
  switch (r) {
  case Relation::Concatenation:
    return "concatenation";
  case Relation::Inclusion:
    return "inclusion";
  case Relation::Interleaved:
    return "interleaved";
  }
  return "?";
}

namespace {

void require_annotation(const Program &p, const TaskAnnotation &ann) {
  try {
    check_annotation(p, ann);
  } catch (const AnalysisError &e) {
    throw ClassifyError(ClassifyError::Kind::AnnotationIncomplete, e.what());
  }
}

DefUse def_use_or_throw(const Program &p) {
  try {
    return compute_def_use(p);
  } catch (const AnalysisError &e) {
    throw ClassifyError(ClassifyError::Kind::AnalysisFailed, e.what());
  }
}

bool defines(const Stmt &s) {
  return s.kind == Stmt::Kind::Assign || s.kind == Stmt::Kind::IndexAssign ||
         s.kind == Stmt::Kind::ForRange;
}

/// Renames variables by order of first occurrence. With `only`, variables
/// outside the set keep their names.
void canonicalize(std::vector<Stmt> &stmts,
                  const std::set<std::string> *only) {
  std::map<std::string, std::string> names;
  auto rename = [&](std::string &v) {
    if (only && !only->count(v))
      return;
    auto [it, fresh] = names.try_emplace(v);
    if (fresh)
      it->second = "$" + std::to_string(names.size() - 1);
    v = it->second;
  };
  for_each_stmt(std::span<Stmt>(stmts), [&](Stmt &s) {
    if (defines(s))
      rename(s.target);
    for (auto &e : s.exprs)
      for_each_expr(e, [&](Expr &x) {
        if (x.kind == Expr::Kind::Var)
          rename(x.name);
      });
  });
}

std::optional<std::int64_t> checked(std::int64_t a, std::int64_t b,
                                    char op) {
  std::int64_t r = 0;
  bool overflow = op == '+'   ? __builtin_add_overflow(a, b, &r)
                  : op == '-' ? __builtin_sub_overflow(a, b, &r)
                              : __builtin_mul_overflow(a, b, &r);
  if (overflow)
    return std::nullopt;
  return r;
}

} // namespace

//===----------------------------------------------------------------------===//
// Repetition
//===----------------------------------------------------------------------===//

std::optional<ScaledFit>
fit_scales(const std::map<int, std::vector<Literal>> &literals,
           const std::vector<std::size_t> &varying) {
  if (varying.empty() || !literals.count(0) || !literals.count(1))
    return std::nullopt;
  auto int_at = [&](int inst, std::size_t p) -> std::optional<std::int64_t> {
    const auto &lits = literals.at(inst);
    if (p >= lits.size() || !std::holds_alternative<std::int64_t>(lits[p]))
      return std::nullopt;
    return std::get<std::int64_t>(lits[p]);
  };

  ScaledFit fit;
  fit.positions = varying;
  std::optional<std::size_t> pivot;
  for (std::size_t p : varying) {
    auto l0 = int_at(0, p), l1 = int_at(1, p);
    if (!l0 || !l1)
      return std::nullopt;
    auto a = checked(*l1, *l0, '-');
    if (!a)
      return std::nullopt;
    fit.coefficients[p] = {*a, *l0};
    if (*a != 0 && !pivot)
      pivot = p;
  }
  if (!pivot)
    return std::nullopt;

  for (const auto &[inst, lits] : literals) {
    if (inst == 0 || inst == 1) {
      fit.scale[inst] = inst;
      continue;
    }
    auto [pa, pb] = fit.coefficients.at(*pivot);
    auto lp = int_at(inst, *pivot);
    if (!lp)
      return std::nullopt;
    auto diff = checked(*lp, pb, '-');
    if (!diff || *diff % pa != 0)
      return std::nullopt;
    std::int64_t s = *diff / pa;
    for (std::size_t p : varying) {
      auto [a, b] = fit.coefficients.at(p);
      auto li = int_at(inst, p);
      auto as = checked(a, s, '*');
      auto v = as ? checked(*as, b, '+') : std::nullopt;
      if (!li || !v || *v != *li)
        return std::nullopt;
    }
    fit.scale[inst] = s;
  }
  return fit;
}

RepetitionEvidence classify_repetition(const Program &p,
                                       const TaskAnnotation &ann,
                                       const Provenance *prov) {
  require_annotation(p, ann);
  auto index = index_main(p);
  RegionInfo regs = regions(p, ann);
  DefUse du = collect_def_use(p);

  std::map<int, std::map<int, std::vector<StmtId>>> by_task;
  for (const auto &[id, inst] : ann.instance_of)
    by_task[ann.task_of.at(id)][inst].push_back(id);

  RepetitionEvidence ev;
  for (const auto &[task, instances] : by_task) {
    if (instances.size() < 2)
      continue;
    TaskRepetition tr;
    tr.task = task;
    tr.instances = instances;

    std::map<int, std::vector<Stmt>> code;
    for (const auto &[inst, ids] : instances) {
      std::set<StmtId> members(ids.begin(), ids.end());
      std::vector<Stmt> roots;
      for (StmtId id : ids) {
        auto o = regs.owner.find(id);
        if (o == regs.owner.end() || !members.count(o->second))
          roots.push_back(*index.at(id));
      }
      // Variables defined only inside this instance are its own and are
      // compared by position; everything else keeps its name.
      std::set<StmtId> covered;
      for_each_stmt(std::span<const Stmt>(roots),
                    [&](const Stmt &s) { covered.insert(s.id); });
      std::map<std::string, bool> owned;
      for (const auto &[id, vars] : du.defs)
        for (const auto &v : vars) {
          bool inside = covered.count(id) > 0;
          auto [it, fresh] = owned.try_emplace(v, inside);
          if (!fresh)
            it->second = it->second && inside;
        }
      for (const auto &prm : p.main().params)
        owned[prm.name] = false;
      std::set<std::string> own;
      for (const auto &[v, mine] : owned)
        if (mine)
          own.insert(v);
      canonicalize(roots, &own);
      code[inst] = std::move(roots);
    }

    const auto &first = code.begin()->second;
    bool identical = std::all_of(code.begin(), code.end(), [&](const auto &c) {
      return ast_equal(std::span<const Stmt>(first),
                       std::span<const Stmt>(c.second));
    });
    if (identical) {
      tr.level = 1;
    } else {
      std::map<int, AbstractedStmts> abs;
      for (const auto &[inst, stmts] : code)
        abs[inst] = abstract_literals(stmts);
      const auto &shape = abs.begin()->second;
      for (const auto &[inst, a] : abs) {
        if (!ast_equal(std::span<const Stmt>(shape.shape),
                       std::span<const Stmt>(a.shape)) ||
            a.literals.size() != shape.literals.size())
          throw ClassifyError(ClassifyError::Kind::InstanceShapeMismatch,
                              "instances of task " + std::to_string(task) +
                                  " differ in structure");
        tr.literals[inst] = a.literals;
      }
      for (std::size_t pos = 0; pos < shape.literals.size(); ++pos)
        for (const auto &[inst, a] : abs)
          if (!(a.literals[pos] == shape.literals[pos])) {
            tr.varying.push_back(pos);
            break;
          }
      tr.level = 2;
      bool hinted = prov && prov->has_scales(task);
      std::size_t n = instances.size();
      if (auto fit = fit_scales(tr.literals, tr.varying)) {
        bool enough = n >= 3 ? tr.varying.size() >= 2 || hinted : hinted;
        if (enough) {
          tr.level = 3;
          tr.fit = std::move(fit);
        }
      }
    }
    ev.level = std::max(ev.level, tr.level);
    ev.tasks.push_back(std::move(tr));
  }
  return ev;
}

bool verify_scaled(const ScaledTemplate &t,
                   const std::map<int, std::vector<Stmt>> &instances,
                   const std::map<int, std::int64_t> &scales) {
  std::size_t binds = 0;
  for (const auto &prm : t.base.params)
    binds += prm.name != t.scale_param;

  auto lower_return = [](std::vector<Stmt> &body) {
    if (!body.empty() && body.back().kind == Stmt::Kind::Return) {
      Stmt last = std::move(body.back());
      body.pop_back();
      if (!last.exprs.empty())
        body.push_back(Stmt::assign("$ret", std::move(last.exprs[0])));
    }
  };

  for (const auto &[inst, stmts] : instances) {
    auto s = scales.find(inst);
    if (s == scales.end())
      return false;
    std::vector<Stmt> expect;
    try {
      expect = instantiate_template(t, s->second);
    } catch (const TransformError &) {
      return false;
    }
    lower_return(expect);

    std::vector<Stmt> got = stmts;
    lower_return(got);
    if (got.size() == expect.size() + binds + 1 &&
        got.back().kind == Stmt::Kind::Assign &&
        got.back().exprs[0].kind == Expr::Kind::Var)
      got.pop_back();
    if (got.size() == expect.size() + binds) {
      for (std::size_t k = 0; k < binds; ++k)
        if (got[k].kind != Stmt::Kind::Assign)
          return false;
      got.erase(got.begin(), got.begin() + static_cast<std::ptrdiff_t>(binds));
    }
    canonicalize(expect, nullptr);
    canonicalize(got, nullptr);
    if (!ast_equal(std::span<const Stmt>(expect), std::span<const Stmt>(got)))
      return false;
  }
  return true;
}

//===----------------------------------------------------------------------===//
// Composition
//===----------------------------------------------------------------------===//

namespace {

std::vector<int> real_tasks(const TaskAnnotation &ann) {
  std::set<int> tasks;
  for (const auto &[id, task] : ann.task_of)
    if (task != kGlueTask)
      tasks.insert(task);
  return {tasks.begin(), tasks.end()};
}

/// Header of a compound statement of `outer` enclosing `id`, if any.
std::optional<StmtId> enclosing_of(const RegionInfo &r,
                                   const TaskAnnotation &ann, StmtId id,
                                   int outer) {
  for (auto it = r.owner.find(id); it != r.owner.end();
       it = r.owner.find(it->second))
    if (ann.task_of.at(it->second) == outer)
      return it->second;
  return std::nullopt;
}

} // namespace

CompositionEvidence classify_composition(const Program &p,
                                         const TaskAnnotation &ann) {
  require_annotation(p, ann);
  RegionInfo r = regions(p, ann);
  std::map<int, std::vector<StmtId>> members;
  for (const auto &[id, task] : ann.task_of)
    members[task].push_back(id);

  CompositionEvidence ev;
  ev.tasks = real_tasks(ann);
  auto included = [&](int inner, int outer) -> std::optional<TaskPair> {
    TaskPair tp;
    for (StmtId id : members[inner]) {
      auto header = enclosing_of(r, ann, id, outer);
      if (!header)
        return std::nullopt;
      if (id == members[inner].front())
        tp.witness = {id, *header};
    }
    tp.relation = Relation::Inclusion;
    tp.inner = inner;
    return tp;
  };

  bool any_inclusion = false, any_interleaved = false;
  for (std::size_t i = 0; i < ev.tasks.size(); ++i)
    for (std::size_t j = i + 1; j < ev.tasks.size(); ++j) {
      int a = ev.tasks[i], b = ev.tasks[j];
      std::optional<TaskPair> tp = included(b, a);
      if (!tp)
        tp = included(a, b);
      if (!tp) {
        tp.emplace();
        auto [alo, ahi] = r.interval.at(a);
        auto [blo, bhi] = r.interval.at(b);
        if (ahi < blo || bhi < alo) {
          tp->relation = Relation::Concatenation;
          tp->witness = ahi < blo ? std::pair{ahi, blo} : std::pair{bhi, alo};
        } else {
          tp->relation = Relation::Interleaved;
          // The later-starting task has a statement inside the other's
          // interval: its own first statement.
          tp->witness = alo <= blo ? std::pair{blo, alo} : std::pair{alo, blo};
        }
      }
      tp->a = a;
      tp->b = b;
      any_inclusion = any_inclusion || tp->relation == Relation::Inclusion;
      any_interleaved =
          any_interleaved || tp->relation == Relation::Interleaved;
      ev.pairs.push_back(*tp);
    }
  ev.level = any_interleaved  ? 3
             : any_inclusion  ? 2
             : ev.tasks.size() >= 2 ? 1
                                    : 0;
  return ev;
}

//===----------------------------------------------------------------------===//
// Data dependency
//===----------------------------------------------------------------------===//

DataEvidence classify_data_dependency(const Program &p,
                                      const TaskAnnotation &ann,
                                      const DepGraph &g) {
  require_annotation(p, ann);
  RegionInfo r = regions(p, ann);
  auto task = [&](StmtId id) { return ann.task_of.at(id); };

  DataEvidence ev;
  std::map<StmtId, SharedWitness> consumers;
  for (const auto &e : g.edges) {
    if (e.kind != DepKind::Flow || task(e.from) == task(e.to))
      continue;
    ev.cross_task_flow.push_back(e);
    auto &w = consumers[e.from];
    if (w.var.empty()) {
      w.definition = e.from;
      w.var = e.var;
      w.task = task(e.from);
    }
    auto &uses = w.consumers[task(e.to)];
    if (std::find(uses.begin(), uses.end(), e.to) == uses.end())
      uses.push_back(e.to);
  }
  for (const auto &[def, w] : consumers)
    if (w.consumers.size() >= 2) {
      ev.shared = w;
      break;
    }

  for (int t : real_tasks(ann)) {
    auto [lo, hi] = r.interval.at(t);
    for (const auto &[id, other] : ann.task_of) {
      if (id <= lo || id >= hi || other == t)
        continue;
      if (enclosing_of(r, ann, id, t))
        continue;
      ev.gap = GapWitness{t, id, other};
      break;
    }
    if (ev.gap)
      break;
  }

  ev.level = ev.shared                    ? 3
             : ev.gap                     ? 2
             : !ev.cross_task_flow.empty() ? 1
                                           : 0;
  return ev;
}

Classification classify(const Program &p, const TaskAnnotation &ann,
                        const Provenance *prov) {
  require_annotation(p, ann);
  DefUse du = def_use_or_throw(p);
  DepGraph g = build_dep_graph(p, du);
  Classification c;
  c.evidence.repetition = classify_repetition(p, ann, prov);
  c.evidence.composition = classify_composition(p, ann);
  c.evidence.data = classify_data_dependency(p, ann, g);
  c.label = {c.evidence.repetition.level, c.evidence.composition.level,
             c.evidence.data.level};
  return c;
}

} // namespace decomplab
