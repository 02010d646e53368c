// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Independent of GoogleTest so it can run as a plain binary.

#include "decomplab/analysis/analysis.hpp"
#include "decomplab/catalog/catalog.hpp"
#include "decomplab/classifier/classifier.hpp"
#include "decomplab/interp/interpreter.hpp"
#include "decomplab/lang/parser.hpp"
#include "decomplab/lang/printer.hpp"
#include "decomplab/transform/transform.hpp"

#include "support/mutations.hpp"
#include "support/oracles.hpp"
#include "support/random_program.hpp"
#include "support/seeds.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>

namespace fs = std::filesystem;
using namespace decomplab;
using decomplab::testing::load_seed;
using decomplab::testing::Seed;
using decomplab::testing::seed_ids;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string &why) {
    if (ok)
      detail = why;
    ok = false;
  }
};

std::string show(const ComplexityLabel &l) {
  std::ostringstream os;
  os << '(' << l.repetition << ',' << l.composition << ',' << l.data << ')';
  return os.str();
}

Classification classify_seed(const Seed &s) {
  return classify(s.unstructured, s.annotation,
                  s.provenance ? &*s.provenance : nullptr);
}

std::vector<Seed> all_seeds() {
  std::vector<Seed> out;
  for (const auto &id : seed_ids())
    out.push_back(load_seed(id));
  return out;
}

Outcome label_reproduction() {
  Outcome o;
  for (const auto &c : decomplab::testing::kSeedLabels) {
    auto got = classify_seed(load_seed(c.id)).label;
    if (!(got == c.label))
      o.fail(std::string(c.id) + " got " + show(got) + ", frozen " +
             show(c.label));
  }
  if (o.ok)
    o.detail = std::to_string(decomplab::testing::kSeedLabels.size()) +
               " seeds match";
  return o;
}

Outcome fish_width() {
  Outcome o;
  Program fish = load_seed("fish").decomposed;
  const FuncDef *draw = nullptr;
  for (const auto &f : fish.functions)
    if (f.name == "draw_fish")
      draw = &f;
  if (!draw) {
    o.fail("draw_fish not found");
    return o;
  }
  std::string widths;
  for (std::int64_t s = 0; s <= 3; ++s) {
    Program only = fish;
    only.functions = {*draw};
    Program ref = parse(pretty_print(only) +
                        "\nfunc main(ch: string) -> int {\n"
                        "    r = draw_fish(" + std::to_string(s) + ", ch)\n"
                        "    return r\n}\n");
    GenerateOptions opt;
    opt.scales = std::vector<std::int64_t>{s};
    GenerateResult g = generate(ref, opt);
    if (!g.provenance.has_scales(1)) {
      o.fail("size " + std::to_string(s) + " was not instantiated");
      continue;
    }
    std::vector<Value> args{Value(std::string("*"))};
    Trace t = run(g.unstructured, args);
    std::size_t width = 0;
    for (const auto &line : t.lines)
      width = std::max(width, line.size());
    std::size_t want = static_cast<std::size_t>(4 * (s + 1) + 3);
    widths += (widths.empty() ? "" : " ") + std::to_string(width);
    if (width != want)
      o.fail("size " + std::to_string(s) + ": width " + std::to_string(width) +
             ", want " + std::to_string(want));
  }
  if (o.ok)
    o.detail = "widths " + widths;
  return o;
}

Outcome equivalence_integrity() {
  Outcome o;
  std::size_t tuples = 0;
  for (const auto &s : all_seeds()) {
    if (s.inputs.size() < 10)
      o.fail(s.id + " has only " + std::to_string(s.inputs.size()) + " inputs");
    tuples += s.inputs.size();
    auto r = equivalent(s.unstructured, s.decomposed, s.inputs);
    if (!r.equivalent)
      o.fail(s.id + " diverges on input " +
             std::to_string(r.first_divergence->input_index));
  }
  if (o.ok)
    o.detail = std::to_string(tuples) + " tuples, 0 divergences";
  return o;
}

Outcome transform_preservation() {
  Outcome o;
  auto seeds = all_seeds();

  int reorderable = 0, shuffles = 0;
  for (const auto &seed : seeds) {
    const Program &p = seed.unstructured;
    DepGraph g = build_dep_graph(p, compute_def_use(p));
    const auto &units = p.main().body;
    std::map<StmtId, std::size_t> unit_of;
    for (std::size_t u = 0; u < units.size(); ++u)
      for_each_stmt(std::span<const Stmt>(&units[u], 1),
                    [&](const Stmt &s) { unit_of[s.id] = u; });
    std::vector<std::size_t> identity(units.size());
    std::iota(identity.begin(), identity.end(), 0);
    bool counted = false;
    for (std::uint64_t k = 0; k < 100; ++k) {
      ReorderResult r;
      try {
        r = reorder(p, g, k);
      } catch (const TransformError &e) {
        if (e.kind() != TransformError::Kind::OnlyOneOrder)
          o.fail(seed.id + ": " + e.what());
        break;
      }
      if (!counted)
        ++reorderable, counted = true;
      ++shuffles;
      std::vector<std::size_t> pos(units.size());
      std::vector<std::size_t> sorted = r.permutation;
      std::sort(sorted.begin(), sorted.end());
      if (sorted != identity) {
        o.fail(seed.id + ": permutation is not a bijection");
        continue;
      }
      for (std::size_t at = 0; at < r.permutation.size(); ++at)
        pos[r.permutation[at]] = at;
      for (const DepEdge &e : g.edges) {
        std::size_t a = unit_of.at(e.from), b = unit_of.at(e.to);
        if (a != b && pos[a] >= pos[b])
          o.fail(seed.id + " seed " + std::to_string(k) + " breaks an edge on " +
                 e.var);
      }
      if (!equivalent(p, r.program, seed.inputs).equivalent)
        o.fail(seed.id + " seed " + std::to_string(k) + " changes behavior");
    }
  }

  for (const auto &seed : seeds) {
    GenerateResult in = inline_all(seed.decomposed);
    if (!equivalent(seed.decomposed, in.unstructured, seed.inputs).equivalent)
      o.fail("inline_all changes " + seed.id);
  }

  Seed garden = load_seed("garden");
  GenerateResult in = inline_all(garden.decomposed);
  int before = classify(in.unstructured, in.annotation).label.data;
  HoistResult h = hoist_common(in.unstructured, in.annotation);
  int after = classify(h.program, h.annotation).label.data;
  if (after != 3)
    o.fail("garden hoist gives data " + std::to_string(after));
  if (!equivalent(garden.decomposed, h.program, garden.inputs).equivalent)
    o.fail("garden hoist changes behavior");

  if (o.ok)
    o.detail = std::to_string(shuffles) + " shuffles over " +
               std::to_string(reorderable) + " reorderable seeds; garden data " +
               std::to_string(before) + " -> " + std::to_string(after);
  return o;
}

Outcome analysis_oracle() {
  Outcome o;
  decomplab::testing::RandomProgramGen gen(20240601);
  int agree = 0;
  for (int k = 0; k < 500; ++k) {
    Program p = gen.loop_free_program(15);
    if (count_stmts(p.main().body) > 15)
      o.fail("program " + std::to_string(k) + " exceeds 15 statements");
    std::string why;
    if (decomplab::testing::same_reaching(
            reaching_definitions(p, collect_def_use(p)),
            decomplab::testing::brute_force_reaching(p), &why))
      ++agree;
    else
      o.fail("program " + std::to_string(k) + ": " + why);
  }
  o.detail = std::to_string(agree) + "/500 agree";
  return o;
}

Outcome classifier_robustness() {
  Outcome o;
  for (const auto &c : decomplab::testing::kSeedLabels)
    for (std::uint64_t k = 1; k <= 5; ++k) {
      Seed s = load_seed(c.id);
      decomplab::testing::rename_variables(s.unstructured, k);
      auto got = classify_seed(s).label;
      if (!(got == c.label))
        o.fail(std::string(c.id) + " renamed with seed " + std::to_string(k) +
               " gives " + show(got));
    }

  Seed twice = load_seed("twice-block");
  int rep_before = classify_seed(twice).label.repetition;
  if (!decomplab::testing::perturb_literal(twice.unstructured, twice.annotation,
                                           1, 1))
    o.fail("twice-block has no literal to perturb");
  int rep_after = classify_seed(twice).label.repetition;
  if (rep_before != 1 || rep_after != 2)
    o.fail("twice-block repetition " + std::to_string(rep_before) + " -> " +
           std::to_string(rep_after) + ", want 1 -> 2");

  // Drop the second consumer task of the hoisted area.
  Seed garden = load_seed("garden");
  DepGraph g = build_dep_graph(garden.unstructured,
                               compute_def_use(garden.unstructured));
  std::optional<StmtId> def;
  for (const Stmt &s : garden.unstructured.main().body)
    if (s.kind == Stmt::Kind::Assign && s.target == "shared")
      def = s.id;
  std::vector<int> consumers;
  if (def)
    for (const DepEdge &e : g.edges) {
      int t = garden.annotation.task_of.at(e.to);
      if (e.kind == DepKind::Flow && e.from == *def && t != kGlueTask &&
          std::find(consumers.begin(), consumers.end(), t) == consumers.end())
        consumers.push_back(t);
    }
  if (consumers.size() < 2) {
    o.fail("garden has no second consumer of the hoisted area");
  } else {
    int data_before = classify_seed(garden).label.data;
    decomplab::testing::drop_consumer(garden.unstructured, garden.annotation,
                                      *def, "shared", consumers[1]);
    int data_after = classify_seed(garden).label.data;
    if (!(data_before == 3 && data_after < 3))
      o.fail("garden data " + std::to_string(data_before) + " -> " +
             std::to_string(data_after) + " after dropping consumer task " +
             std::to_string(consumers[1]) + " of " +
             std::to_string(consumers.size()) + "; want a drop below 3");
  }

  if (o.ok)
    o.detail = "renaming stable; twice-block 1 -> 2; garden data lowered";
  return o;
}

std::map<std::string, std::string> tree(const fs::path &root) {
  std::map<std::string, std::string> out;
  for (const auto &e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file())
      out[fs::relative(e.path(), root).string()] = read_file(e.path());
  return out;
}

Outcome round_trip() {
  Outcome o;
  for (const auto &s : all_seeds())
    for (const Program *p : {&s.unstructured, &s.decomposed}) {
      std::string once = pretty_print(*p);
      if (pretty_print(parse(once)) != once)
        o.fail(s.id + " is not a pretty_print fixed point");
    }

  Catalog c = build_catalog(decomplab::testing::kSeedsDir);
  std::mt19937_64 rng(std::random_device{}());
  fs::path dir =
      fs::temp_directory_path() / ("decomplab-accept-" + std::to_string(rng()));
  fs::create_directories(dir);
  save(c, dir / "catalog.json");
  if (!(load(dir / "catalog.json") == c))
    o.fail("save/load changes the catalog");
  export_site(c, dir / "a");
  export_site(c, dir / "b");
  auto a = tree(dir / "a");
  if (a != tree(dir / "b"))
    o.fail("export_site differs between runs");
  fs::remove_all(dir);

  if (o.ok)
    o.detail = std::to_string(a.size()) + " exported files identical";
  return o;
}

struct Criterion {
  const char *name;
  double budget_s;
  std::function<Outcome()> check;
};

} // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"label-reproduction", 5, label_reproduction},
      {"fish-width", 0, fish_width},
      {"equivalence-integrity", 10, equivalence_integrity},
      {"transform-preservation", 60, transform_preservation},
      {"analysis-oracle", 30, analysis_oracle},
      {"classifier-robustness", 0, classifier_robustness},
      {"round-trip-determinism", 0, round_trip},
  };

  int failed = 0;
  for (const auto &c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception &e) {
      o.fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    if (c.budget_s > 0 && secs >= c.budget_s)
      o.fail("took " + std::to_string(secs) + " s");
    failed += !o.ok;
    std::printf("%s %-24s %7.3f s  %s\n", o.ok ? "PASS" : "FAIL", c.name, secs,
                o.detail.c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed,
              criteria.size());
  return failed ? 1 : 0;
}
