#include "decomplab/classifier/classifier.hpp"
#include "decomplab/lang/parser.hpp"

#include "support/mutations.hpp"
#include "support/seeds.hpp"

#include <gtest/gtest.h>

namespace decomplab {
namespace {

using testing::kSeedLabels;
using testing::load_seed;

Classification classify_seed(const testing::Seed &s) {
  return classify(s.unstructured, s.annotation,
                  s.provenance ? &*s.provenance : nullptr);
}

/// Annotation listing `tasks[k]` for statement k.
TaskAnnotation tasks(std::initializer_list<int> ts,
                     std::map<int, int> instances = {}) {
  TaskAnnotation a;
  int k = 0;
  for (int t : ts)
    a.task_of[StmtId{k++}] = t;
  for (auto [sid, inst] : instances)
    a.instance_of[StmtId{sid}] = inst;
  return a;
}

std::map<int, std::vector<Stmt>> top_level_instances(const testing::Seed &s,
                                                     int task) {
  std::map<int, std::vector<Stmt>> out;
  for (const Stmt &st : s.unstructured.main().body)
    if (s.annotation.task_of.at(st.id) == task)
      out[s.annotation.instance_of.at(st.id)].push_back(st);
  return out;
}

TEST(Classify, SeedLabels) {
  for (const auto &c : kSeedLabels) {
    auto seed = load_seed(c.id);
    EXPECT_EQ(classify_seed(seed).label, c.label) << c.id;
  }
}

TEST(Classify, SingleTaskStraightLine) {
  Program p = parse("func main() -> int { x = 1\n y = x + 1\n return y }");
  auto c = classify(p, tasks({1, 1, 1}));
  EXPECT_EQ(c.label, (ComplexityLabel{0, 0, 0}));
}

TEST(Classify, Deterministic) {
  auto seed = load_seed("garden");
  auto a = classify_seed(seed);
  auto b = classify_seed(seed);
  EXPECT_EQ(a.label, b.label);
  EXPECT_EQ(to_json(a.evidence), to_json(b.evidence));
}

TEST(Classify, IncompleteAnnotation) {
  Program p = parse("func main() -> int { x = 1\n return x }");
  try {
    classify(p, tasks({1}));
    FAIL();
  } catch (const ClassifyError &e) {
    EXPECT_EQ(e.kind(), ClassifyError::Kind::AnnotationIncomplete);
  }
}

TEST(Repetition, Levels) {
  Program identical = parse("func main() -> void {\n print(\"a\")\n print(\"a\")\n}");
  EXPECT_EQ(classify_repetition(identical, tasks({1, 1}, {{0, 0}, {1, 1}})).level,
            1);
  Program param = parse("func main() -> void {\n print(\"a\")\n print(\"b\")\n}");
  auto two = classify_repetition(param, tasks({1, 1}, {{0, 0}, {1, 1}}));
  EXPECT_EQ(two.level, 2);
  ASSERT_EQ(two.tasks.size(), 1u);
  EXPECT_EQ(two.tasks[0].varying, std::vector<std::size_t>{0});
  // Two numeric copies always fit a line, so they stay at level 2.
  Program line2 = parse("func main() -> void {\n print(1, 5)\n print(2, 7)\n}");
  EXPECT_EQ(classify_repetition(line2, tasks({1, 1}, {{0, 0}, {1, 1}})).level,
            2);
  Program line3 = parse(
      "func main() -> void {\n print(1, 5)\n print(2, 7)\n print(3, 9)\n}");
  auto three = classify_repetition(
      line3, tasks({1, 1, 1}, {{0, 0}, {1, 1}, {2, 2}}));
  EXPECT_EQ(three.level, 3);
  ASSERT_TRUE(three.tasks[0].fit);
  const ScaledFit &fit = *three.tasks[0].fit;
  EXPECT_EQ(fit.scale.at(0), 0);
  EXPECT_EQ(fit.scale.at(1), 1);
  EXPECT_EQ(fit.scale.at(2), 2);
  EXPECT_EQ(fit.coefficients.at(0), (std::pair<std::int64_t, std::int64_t>{1, 1}));
  EXPECT_EQ(fit.coefficients.at(1), (std::pair<std::int64_t, std::int64_t>{2, 5}));
  Program bent = parse(
      "func main() -> void {\n print(1, 5)\n print(2, 7)\n print(3, 10)\n}");
  EXPECT_EQ(classify_repetition(
                bent, tasks({1, 1, 1}, {{0, 0}, {1, 1}, {2, 2}}))
                .level,
            2);
}

TEST(Repetition, NoRepeatedTaskIsLevelZero) {
  Program p = parse("func main() -> void {\n print(1)\n print(2)\n}");
  EXPECT_EQ(classify_repetition(p, tasks({1, 2})).level, 0);
}

TEST(Repetition, ShapeMismatch) {
  Program p = parse("func main() -> void {\n print(1)\n print(1 + 1)\n}");
  try {
    classify_repetition(p, tasks({1, 1}, {{0, 0}, {1, 1}}));
    FAIL();
  } catch (const ClassifyError &e) {
    EXPECT_EQ(e.kind(), ClassifyError::Kind::InstanceShapeMismatch);
  }
}

TEST(Repetition, LevelOneIsNotReportedAsTwo) {
  auto seed = load_seed("twice-block");
  auto ev = classify_repetition(seed.unstructured, seed.annotation);
  EXPECT_EQ(ev.level, 1);
  ASSERT_FALSE(ev.tasks.empty());
  EXPECT_TRUE(ev.tasks[0].varying.empty());
}

TEST(Repetition, PerturbedCopyBecomesParameterized) {
  auto seed = load_seed("twice-block");
  ASSERT_TRUE(testing::perturb_literal(seed.unstructured, seed.annotation, 1, 1));
  EXPECT_EQ(classify_repetition(seed.unstructured, seed.annotation).level, 2);
}

TEST(Repetition, FishFitIsAffine) {
  auto seed = load_seed("fish");
  auto ev = classify_repetition(seed.unstructured, seed.annotation,
                                &*seed.provenance);
  ASSERT_EQ(ev.level, 3);
  const auto &fit = *ev.tasks[0].fit;
  EXPECT_GE(fit.positions.size(), 2u);
  for (std::size_t pos : fit.positions) {
    auto [a, b] = fit.coefficients.at(pos);
    for (const auto &[inst, s] : fit.scale) {
      const Literal &lit = ev.tasks[0].literals.at(inst).at(pos);
      EXPECT_EQ(std::get<std::int64_t>(lit), a * s + b);
    }
  }
}

TEST(FitScales, Invariants) {
  std::map<int, std::vector<Literal>> lits{
      {0, {std::int64_t{7}, std::string("x")}},
      {1, {std::int64_t{11}, std::string("x")}},
      {2, {std::int64_t{15}, std::string("x")}}};
  auto fit = fit_scales(lits, {0});
  ASSERT_TRUE(fit);
  EXPECT_EQ(fit->coefficients.at(0), (std::pair<std::int64_t, std::int64_t>{4, 7}));
  lits[1][0] = std::int64_t{7};
  lits[2][0] = std::int64_t{7};
  EXPECT_FALSE(fit_scales(lits, {0}));
  lits[1][0] = std::string("y");
  EXPECT_FALSE(fit_scales(lits, {0}));
}

TEST(VerifyScaled, FishInstances) {
  auto seed = load_seed("fish");
  const FuncDef *f = seed.decomposed.find("draw_fish");
  ASSERT_NE(f, nullptr);
  ScaledTemplate t = make_template(*f, "size");
  auto instances = top_level_instances(seed, 1);
  std::map<int, std::int64_t> scales{{0, 1}, {1, 2}, {2, 3}};
  EXPECT_TRUE(verify_scaled(t, instances, scales));

  auto perturbed = instances;
  Program holder;
  holder.functions.push_back(FuncDef{"main", {}, Type::Void, perturbed[1], {}});
  TaskAnnotation all;
  for_each_stmt(std::span<const Stmt>(holder.main().body), [&](const Stmt &s) {
    all.task_of[s.id] = 1;
    all.instance_of[s.id] = 0;
  });
  ASSERT_TRUE(testing::perturb_literal(holder, all, 1, 0));
  perturbed[1] = holder.main().body;
  EXPECT_FALSE(verify_scaled(t, perturbed, scales));

  std::map<int, std::vector<Stmt>> swapped{{0, instances[0]}, {1, instances[1]}};
  EXPECT_FALSE(verify_scaled(t, swapped, {{0, 2}, {1, 1}}));
}

TEST(VerifyScaled, OwnInstantiationAtZero) {
  Program p = parse("func f(s: int) -> int {\n x = 2 * s + 1\n print(x)\n"
                    " return x\n}\nfunc main() -> void { }");
  ScaledTemplate t = make_template(p.functions[0], "s");
  auto at0 = instantiate_template(t, 0);
  at0.pop_back();
  at0.push_back(Stmt::assign("$ret", Expr::var("x")));
  EXPECT_TRUE(verify_scaled(t, {{0, at0}}, {{0, 0}}));
}

TEST(Composition, Relations) {
  Program concat = parse("func main() -> void {\n x = 1\n y = 2\n}");
  EXPECT_EQ(classify_composition(concat, tasks({1, 2})).level, 1);

  Program incl = parse(
      "func main(n: int) -> void {\n while n > 0 {\n n = n - 1\n print(n)\n}\n}");
  auto ci = classify_composition(incl, tasks({1, 1, 2}));
  EXPECT_EQ(ci.level, 2);
  ASSERT_EQ(ci.pairs.size(), 1u);
  EXPECT_EQ(ci.pairs[0].relation, Relation::Inclusion);
  EXPECT_EQ(ci.pairs[0].inner, 2);

  Program inter = parse("func main() -> void {\n x = 1\n y = 2\n x = 3\n}");
  auto cx = classify_composition(inter, tasks({1, 2, 1}));
  EXPECT_EQ(cx.level, 3);
  EXPECT_EQ(cx.pairs[0].relation, Relation::Interleaved);

  // Glue never takes part in a relation.
  Program glue = parse("func main() -> void {\n x = 1\n y = 2\n x = 3\n}");
  EXPECT_EQ(classify_composition(glue, tasks({1, 0, 1})).level, 0);
}

TEST(Composition, SeedWitnesses) {
  auto interleaved = load_seed("min-count-interleaved");
  auto ev = classify_composition(interleaved.unstructured, interleaved.annotation);
  ASSERT_EQ(ev.pairs.size(), 1u);
  EXPECT_EQ(ev.pairs[0].relation, Relation::Interleaved);
  auto inclusion = load_seed("min-count-inclusion");
  auto ei = classify_composition(inclusion.unstructured, inclusion.annotation);
  ASSERT_EQ(ei.pairs.size(), 1u);
  EXPECT_EQ(ei.pairs[0].relation, Relation::Inclusion);
  EXPECT_EQ(ei.pairs[0].inner, 2);
}

DataEvidence data_of(const Program &p, const TaskAnnotation &ann) {
  return classify_data_dependency(p, ann,
                                  build_dep_graph(p, compute_def_use(p)));
}

TEST(Data, Levels) {
  Program indep = parse("func main() -> void {\n x = 1\n y = 2\n}");
  EXPECT_EQ(data_of(indep, tasks({1, 2})).level, 0);
  Program seq = parse("func main() -> void {\n x = 1\n y = x + 1\n}");
  EXPECT_EQ(data_of(seq, tasks({1, 2})).level, 1);
  Program gap = parse("func main() -> void {\n x = 1\n y = 2\n z = x\n}");
  auto g = data_of(gap, tasks({1, 2, 1}));
  EXPECT_EQ(g.level, 2);
  ASSERT_TRUE(g.gap);
  EXPECT_EQ(g.gap->task, 1);
  EXPECT_EQ(g.gap->foreign, StmtId{1});
  Program shared = parse(
      "func main() -> void {\n a = 2\n x = a\n y = a * 2\n z = a + 1\n}");
  auto s = data_of(shared, tasks({0, 1, 2, 3}));
  EXPECT_EQ(s.level, 3);
  ASSERT_TRUE(s.shared);
  EXPECT_EQ(s.shared->definition, StmtId{0});
}

TEST(Data, NestedForeignStatementIsNotAGap) {
  Program p = parse("func main(n: int) -> void {\n s = 0\n"
                    " for i in range(0, n) {\n print(i)\n }\n print(s)\n}");
  // The loop belongs to task 1, the print inside it to task 2. Reading i is
  // a cross-task flow, but the nested print does not split task 1.
  auto ev = data_of(p, tasks({1, 1, 2, 1}));
  EXPECT_EQ(ev.level, 1);
  EXPECT_FALSE(ev.gap);
}

TEST(Data, SharedWitnessIsConfirmedByTheGraph) {
  auto seed = load_seed("garden");
  const Program &p = seed.unstructured;
  DepGraph g = build_dep_graph(p, compute_def_use(p));
  auto ev = classify_data_dependency(p, seed.annotation, g);
  ASSERT_TRUE(ev.shared);
  std::set<int> consumer_tasks;
  for (const DepEdge &e : g.edges)
    if (e.kind == DepKind::Flow && e.from == ev.shared->definition) {
      int t = seed.annotation.task_of.at(e.to);
      if (t != ev.shared->task)
        consumer_tasks.insert(t);
    }
  EXPECT_GE(consumer_tasks.size(), 2u);
  std::set<int> claimed;
  for (const auto &[t, ids] : ev.shared->consumers)
    claimed.insert(t);
  EXPECT_EQ(claimed, consumer_tasks);
}

TEST(Data, RubiksGapWitness) {
  auto seed = load_seed("rubiks");
  auto ev = data_of(seed.unstructured, seed.annotation);
  EXPECT_EQ(ev.level, 2);
  ASSERT_TRUE(ev.gap);
  EXPECT_EQ(ev.gap->task, 1);
  EXPECT_EQ(ev.gap->foreign_task, 0);
}

TEST(Robustness, BijectiveRenamingKeepsLabels) {
  for (const auto &c : kSeedLabels) {
    for (std::uint64_t s = 1; s <= 3; ++s) {
      auto seed = load_seed(c.id);
      testing::rename_variables(seed.unstructured, s);
      ComplexityLabel got;
      EXPECT_NO_THROW(got = classify_seed(seed).label) << c.id;
      EXPECT_EQ(got, c.label) << c.id << " seed " << s;
    }
  }
}

TEST(Robustness, ReorderingIndependentGlueKeepsData) {
  Program a = parse("func main() -> void {\n g = 1\n h = 2\n x = 1\n y = x\n}");
  Program b = parse("func main() -> void {\n h = 2\n g = 1\n x = 1\n y = x\n}");
  auto ann = tasks({0, 0, 1, 2});
  EXPECT_EQ(data_of(a, ann).level, data_of(b, ann).level);
}

} // namespace
} // namespace decomplab
