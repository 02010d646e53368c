#include "decomplab/transform/transform.hpp"

#include <algorithm>
#include <bit>
#include <climits>
#include <map>
#include <numeric>
#include <set>

namespace decomplab {

//===----------------------------------------------------------------------===//
// Reordering
//===----------------------------------------------------------------------===//

namespace {

bool contains_kind(const Stmt &top, Stmt::Kind kind) {
  bool found = false;
  for_each_stmt(std::span<const Stmt>(&top, 1),
                [&](const Stmt &s) { found = found || s.kind == kind; });
  return found;
}

bool contains_call(const Stmt &top) {
  bool found = false;
  for_each_stmt(std::span<const Stmt>(&top, 1), [&](const Stmt &s) {
    for (const auto &e : s.exprs)
      for_each_expr(e, [&](const Expr &x) {
        found = found || x.kind == Expr::Kind::Call;
      });
  });
  return found;
}

} // namespace

ReorderResult reorder(const Program &p, const DepGraph &g,
                      std::uint64_t seed) {
  const auto &units = p.main().body;
  const std::size_t n = units.size();

  std::map<StmtId, std::size_t> unit_of;
  for (std::size_t u = 0; u < n; ++u)
    for_each_stmt(std::span<const Stmt>(&units[u], 1),
                  [&](const Stmt &s) { unit_of[s.id] = u; });

  // before[i][j]: unit i must stay before unit j (i < j).
  std::vector<std::vector<bool>> before(n, std::vector<bool>(n, false));
  for (const auto &e : g.edges) {
    std::size_t a = unit_of.at(e.from), b = unit_of.at(e.to);
    if (a != b)
      before[std::min(a, b)][std::max(a, b)] = true;
  }
  // Returns end the run, so nothing crosses them. Calls may print.
  std::vector<bool> barrier(n), effect(n);
  for (std::size_t u = 0; u < n; ++u) {
    barrier[u] = contains_kind(units[u], Stmt::Kind::Return);
    effect[u] = barrier[u] || contains_call(units[u]) ||
                contains_kind(units[u], Stmt::Kind::Print);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (barrier[i] || barrier[j] || (effect[i] && effect[j]))
        before[i][j] = true;

  std::optional<std::size_t> free_pair;
  for (std::size_t i = 0; i + 1 < n && !free_pair; ++i)
    if (!before[i][i + 1])
      free_pair = i;
  if (!free_pair)
    throw TransformError(TransformError::Kind::OnlyOneOrder,
                         "the dependency graph admits a single order");

  SplitMix64 rng(seed);
  auto sample = [&] {
    std::vector<std::size_t> indegree(n, 0), order;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        indegree[j] += before[i][j];
    std::vector<std::size_t> ready;
    for (std::size_t u = 0; u < n; ++u)
      if (!indegree[u])
        ready.push_back(u);
    while (!ready.empty()) {
      std::size_t k = rng.below(ready.size());
      std::size_t u = ready[k];
      ready.erase(ready.begin() + static_cast<std::ptrdiff_t>(k));
      order.push_back(u);
      for (std::size_t j = u + 1; j < n; ++j)
        if (before[u][j] && --indegree[j] == 0)
          ready.insert(std::upper_bound(ready.begin(), ready.end(), j), j);
    }
    return order;
  };

  std::vector<std::size_t> identity(n);
  std::iota(identity.begin(), identity.end(), 0);
  std::vector<std::size_t> order = sample();
  for (int attempt = 0; attempt < 64 && order == identity; ++attempt)
    order = sample();
  if (order == identity)
    std::swap(order[*free_pair], order[*free_pair + 1]);

  ReorderResult r;
  r.program = p;
  auto &body = r.program.main().body;
  body.clear();
  for (std::size_t u : order)
    body.push_back(units[u]);
  r.permutation = std::move(order);
  r.previous_ids = renumber(r.program);
  return r;
}

TaskAnnotation remap_annotation(const TaskAnnotation &ann,
                                std::span<const StmtId> previous_ids) {
  TaskAnnotation out;
  out.task_names = ann.task_names;
  for (std::size_t i = 0; i < previous_ids.size(); ++i) {
    StmtId now{static_cast<std::int32_t>(i)};
    if (auto it = ann.task_of.find(previous_ids[i]); it != ann.task_of.end())
      out.task_of[now] = it->second;
    if (auto it = ann.instance_of.find(previous_ids[i]);
        it != ann.instance_of.end())
      out.instance_of[now] = it->second;
  }
  return out;
}

//===----------------------------------------------------------------------===//
// Hoisting
//===----------------------------------------------------------------------===//

namespace {

class CommonFinder {
public:
  CommonFinder(const Program &p)
      : index_(index_main(p)), in_(reaching_in(p, collect_def_use(p))) {}

  /// Structural key of `e` evaluated at statement `at`. Variables are traced
  /// back through plain copies whose source is unchanged in between, so two
  /// keys match only when the expressions compute the same value. Nullopt
  /// for expressions with calls.
  std::optional<std::string> key(const Expr &e, StmtId at) const {
    std::string out;
    return append_key(e, at, out) ? std::optional(out) : std::nullopt;
  }

  /// The copy-propagated form of `e` at `at`.
  Expr root_form(const Expr &e, StmtId at) const {
    Expr out = e;
    for_each_expr(out, [&](Expr &x) {
      if (x.kind == Expr::Kind::Var)
        x.name = resolve(x.name, at).first;
    });
    return out;
  }

  /// (root variable, reaching definitions of the root).
  std::pair<std::string, std::set<StmtId>> resolve(std::string var,
                                                   StmtId at) const {
    for (;;) {
      std::set<StmtId> defs = reaching(at, var);
      if (defs.size() != 1 || *defs.begin() == kEntryDef)
        return {var, defs};
      const Stmt &d = *index_.at(*defs.begin());
      if (d.kind != Stmt::Kind::Assign ||
          d.exprs[0].kind != Expr::Kind::Var)
        return {var, defs};
      const std::string &src = d.exprs[0].name;
      if (reaching(d.id, src) != reaching(at, src))
        return {var, defs};
      var = src;
      at = d.id;
    }
  }

  std::set<StmtId> reaching(StmtId at, const std::string &var) const {
    auto s = in_.find(at);
    if (s == in_.end())
      return {};
    auto v = s->second.find(var);
    return v == s->second.end() ? std::set<StmtId>{} : v->second;
  }

private:
  bool append_key(const Expr &e, StmtId at, std::string &out) const {
    switch (e.kind) {
    case Expr::Kind::Call:
    case Expr::Kind::Hole:
      return false;
    case Expr::Kind::Var: {
      auto [root, defs] = resolve(e.name, at);
      out += "v:" + root + "@";
      for (StmtId d : defs)
        out += std::to_string(to_int(d)) + ",";
      out += ";";
      return true;
    }
    case Expr::Kind::IntLit:
      out += "i:" + std::to_string(e.int_value) + ";";
      return true;
    case Expr::Kind::FloatLit:
      out += "f:" +
             std::to_string(std::bit_cast<std::uint64_t>(e.float_value)) + ";";
      return true;
    case Expr::Kind::BoolLit:
      out += e.bool_value ? "b:1;" : "b:0;";
      return true;
    case Expr::Kind::StrLit:
      out += "s:" + std::to_string(e.name.size()) + ":" + e.name + ";";
      return true;
    default:
      break;
    }
    out += "(" + std::to_string(static_cast<int>(e.kind)) + ":" +
           std::to_string(static_cast<int>(e.binary_op)) + ":" +
           std::to_string(static_cast<int>(e.unary_op)) + " ";
    for (const auto &op : e.operands)
      if (!append_key(op, at, out))
        return false;
    out += ")";
    return true;
  }

  std::map<StmtId, const Stmt *> index_;
  ReachingIn in_;
};

std::size_t expr_size(const Expr &e) {
  std::size_t n = 0;
  for_each_expr(e, [&](const Expr &) { ++n; });
  return n;
}

bool has_var(const Expr &e) {
  bool found = false;
  for_each_expr(e, [&](const Expr &x) {
    found = found || x.kind == Expr::Kind::Var;
  });
  return found;
}

struct Candidate {
  std::size_t size = 0;
  StmtId first{0};
  const Expr *sample = nullptr;
  std::set<int> tasks;
};

} // namespace

HoistResult hoist_common(const Program &p, const TaskAnnotation &ann) {
  check_annotation(p, ann);
  CommonFinder finder(p);
  std::map<std::string, Candidate> candidates;
  for_each_stmt(p.main().body, [&](const Stmt &s) {
    int task = ann.task_of.at(s.id);
    for (const auto &root : s.exprs)
      for_each_expr(root, [&](const Expr &e) {
        if (e.operands.empty() || e.kind == Expr::Kind::ListLit ||
            !has_var(e))
          return;
        auto k = finder.key(e, s.id);
        if (!k)
          return;
        auto [it, fresh] = candidates.try_emplace(*k);
        if (fresh) {
          it->second.size = expr_size(e);
          it->second.first = s.id;
          it->second.sample = &e;
        }
        if (task != kGlueTask)
          it->second.tasks.insert(task);
      });
  });

  // Top-level statement enclosing each statement of main.
  std::map<StmtId, std::size_t> top_of;
  const auto &body = p.main().body;
  for (std::size_t i = 0; i < body.size(); ++i)
    for_each_stmt(std::span<const Stmt>(&body[i], 1),
                  [&](const Stmt &s) { top_of[s.id] = i; });

  std::vector<std::pair<std::string, const Candidate *>> ranked;
  for (const auto &[k, c] : candidates)
    if (c.tasks.size() >= 2)
      ranked.emplace_back(k, &c);
  std::sort(ranked.begin(), ranked.end(), [](const auto &a, const auto &b) {
    if (a.second->size != b.second->size)
      return a.second->size > b.second->size;
    return a.second->first < b.second->first;
  });

  for (const auto &[k, c] : ranked) {
    std::size_t insert_at = top_of.at(c->first);
    StmtId anchor = body[insert_at].id;
    Expr value = finder.root_form(*c->sample, c->first);
    // Every root must already hold its value where the definition goes.
    bool valid = true;
    for_each_expr(*c->sample, [&](const Expr &x) {
      if (x.kind != Expr::Kind::Var)
        return;
      auto [root, defs] = finder.resolve(x.name, c->first);
      valid = valid && finder.reaching(anchor, root) == defs &&
              !defs.empty() && !defs.count(anchor);
    });
    if (!valid)
      continue;

    std::set<std::string> used;
    for_each_stmt(body, [&](const Stmt &s) {
      if (s.kind == Stmt::Kind::Assign || s.kind == Stmt::Kind::ForRange ||
          s.kind == Stmt::Kind::IndexAssign)
        used.insert(s.target);
      for (const auto &e : s.exprs)
        for_each_expr(e, [&](const Expr &x) {
          if (x.kind == Expr::Kind::Var)
            used.insert(x.name);
        });
    });
    for (const auto &prm : p.main().params)
      used.insert(prm.name);
    std::string var = "shared";
    for (int i = 1; used.count(var); ++i)
      var = "shared_" + std::to_string(i);

    HoistResult r;
    r.program = p;
    auto &out_body = r.program.main().body;
    for_each_stmt(std::span<Stmt>(out_body), [&](Stmt &s) {
      std::function<void(Expr &)> replace = [&](Expr &e) {
        if (!e.operands.empty() && finder.key(e, s.id) == k) {
          e = Expr::var(var, e.pos);
          return;
        }
        for (auto &op : e.operands)
          replace(op);
      };
      for (auto &e : s.exprs)
        replace(e);
    });
    constexpr StmtId kNew{INT32_MAX};
    Stmt def = Stmt::assign(var, value, body[insert_at].pos);
    def.id = kNew;
    out_body.insert(out_body.begin() + static_cast<std::ptrdiff_t>(insert_at),
                    std::move(def));
    std::vector<StmtId> previous = renumber(r.program);
    TaskAnnotation with_new = ann;
    with_new.task_of[kNew] = kGlueTask;
    r.annotation = remap_annotation(with_new, previous);
    r.definition =
        StmtId{static_cast<std::int32_t>(
            std::find(previous.begin(), previous.end(), kNew) -
            previous.begin())};
    r.var = var;
    return r;
  }
  throw TransformError(TransformError::Kind::NoCommonComputation,
                       "no pure expression is computed by two tasks");
}

} // namespace decomplab
