#include "decomplab/lang/ast.hpp"
#include "decomplab/lang/parser.hpp"
#include "decomplab/lang/printer.hpp"

#include "support/random_program.hpp"
#include "support/seeds.hpp"

#include <gtest/gtest.h>

namespace decomplab {
namespace {

using testing::RandomProgramGen;

TEST(Parse, MinimalProgram) {
  Program p = parse("func main() -> int { return 0 }");
  ASSERT_EQ(p.functions.size(), 1u);
  const FuncDef &f = p.main();
  EXPECT_EQ(f.return_type, Type::Int);
  ASSERT_EQ(f.body.size(), 1u);
  EXPECT_EQ(f.body[0].kind, Stmt::Kind::Return);
  ASSERT_EQ(f.body[0].exprs.size(), 1u);
  EXPECT_EQ(f.body[0].exprs[0].kind, Expr::Kind::IntLit);
  EXPECT_EQ(f.body[0].exprs[0].int_value, 0);
}

TEST(Parse, MissingExpressionIsSyntaxError) {
  try {
    parse("func main() -> void { x = }");
    FAIL() << "expected a syntax error";
  } catch (const ParseError &e) {
    EXPECT_EQ(e.kind(), ParseError::Kind::Syntax);
    EXPECT_EQ(e.pos().line, 1);
    EXPECT_FALSE(e.expected().empty());
  }
}

TEST(Parse, ProgramLevelErrors) {
  auto kind_of = [](const char *src) {
    try {
      parse(src);
    } catch (const ParseError &e) {
      return e.kind();
    }
    ADD_FAILURE() << "no error for: " << src;
    return ParseError::Kind::Syntax;
  };
  EXPECT_EQ(kind_of("func f() -> void { }"), ParseError::Kind::MissingMain);
  EXPECT_EQ(kind_of("func main() -> void { }\nfunc main() -> void { }"),
            ParseError::Kind::DuplicateFunction);
  EXPECT_EQ(kind_of("func f() -> void { g() }\nfunc g() -> void { f() }\n"
                    "func main() -> void { f() }"),
            ParseError::Kind::RecursionNotSupported);
  EXPECT_EQ(kind_of("func main() -> void { f() }"),
            ParseError::Kind::UnknownFunction);
  EXPECT_EQ(kind_of("func main(a: int, a: int) -> void { }"),
            ParseError::Kind::DuplicateParameter);
  EXPECT_EQ(kind_of("func main() -> int { x = 1 }"),
            ParseError::Kind::MissingReturn);
  EXPECT_EQ(kind_of("func main() -> void { return 1 }"),
            ParseError::Kind::InvalidReturn);
}

TEST(Parse, ComparisonsDoNotChain) {
  EXPECT_THROW(parse("func main() -> bool { return 1 < 2 < 3 }"), ParseError);
  EXPECT_NO_THROW(parse("func main() -> bool { return (1 < 2) == true }"));
}

TEST(Parse, PrecedenceFollowsGrammar) {
  Program p = parse("func main() -> bool { return not 1 + 2 * 3 < 4 or x }");
  const Expr &e = p.main().body[0].exprs[0];
  ASSERT_EQ(e.kind, Expr::Kind::Binary);
  EXPECT_EQ(e.binary_op, BinaryOp::Or);
  const Expr &lhs = e.operands[0];
  ASSERT_EQ(lhs.kind, Expr::Kind::Unary);
  EXPECT_EQ(lhs.unary_op, UnaryOp::Not);
  const Expr &cmp = lhs.operands[0];
  EXPECT_EQ(cmp.binary_op, BinaryOp::Lt);
  EXPECT_EQ(cmp.operands[0].binary_op, BinaryOp::Add);
  EXPECT_EQ(cmp.operands[0].operands[1].binary_op, BinaryOp::Mul);
}

TEST(Parse, RubiksHasTenTopLevelStatements) {
  Program p = parse(read_file(testing::kSeedsDir / "rubiks/unstructured.mp"));
  EXPECT_EQ(p.functions.size(), 1u);
  EXPECT_EQ(p.main().body.size(), 10u);
}

TEST(Parse, StatementIdsArePreorderBijection) {
  Program p = parse(R"(
func main(n: int) -> int {
    x = 0
    for i in range(0, n) {
        if i % 2 == 0 {
            x = x + i
        } else {
            print(i)
        }
    }
    while x > 10 {
        x = x - 10
    }
    return x
}
)");
  std::vector<int> ids;
  std::vector<Stmt::Kind> kinds;
  for_each_stmt(std::span<const Stmt>(p.main().body), [&](const Stmt &s) {
    ids.push_back(to_int(s.id));
    kinds.push_back(s.kind);
  });
  ASSERT_EQ(ids.size(), 8u);
  for (int k = 0; k < 8; ++k)
    EXPECT_EQ(ids[static_cast<std::size_t>(k)], k);
  EXPECT_EQ(kinds[2], Stmt::Kind::If);
  EXPECT_EQ(kinds[3], Stmt::Kind::Assign);
  EXPECT_EQ(kinds[4], Stmt::Kind::Print);
}

TEST(Parse, CommentsAndEscapes) {
  Program p = parse("# header\nfunc main() -> string {\n"
                    "    return \"a\\\"b\\\\c\\n\" # trailing\n}\n");
  EXPECT_EQ(p.main().body[0].exprs[0].name, "a\"b\\c\n");
}

TEST(PrettyPrint, CanonicalMinimal) {
  Program p;
  FuncDef f;
  f.name = "main";
  f.return_type = Type::Int;
  f.body.push_back(Stmt::return_(Expr::int_lit(0)));
  p.functions.push_back(f);
  EXPECT_EQ(pretty_print(p), "func main() -> int {\n    return 0\n}\n");
}

TEST(PrettyPrint, SeedsRoundTripAndAreDeterministic) {
  for (const std::string &id : testing::seed_ids()) {
    for (const char *side : {"unstructured.mp", "decomposed.mp"}) {
      Program p = parse(read_file(testing::kSeedsDir / id / side));
      std::string once = pretty_print(p);
      Program q = parse(once);
      EXPECT_TRUE(ast_equal(p, q)) << id << "/" << side;
      EXPECT_EQ(pretty_print(q), once) << id << "/" << side;
    }
  }
}

TEST(PrettyPrint, BlankLineBetweenFunctions) {
  Program p = parse("func f() -> void { }\nfunc main() -> void { f() }");
  EXPECT_EQ(pretty_print(p),
            "func f() -> void {\n}\n\nfunc main() -> void {\n    f()\n}\n");
}

TEST(AstEqual, Examples) {
  Program a = parse("func main() -> void { x = 1\n print(x) }");
  Program b = parse("func main() -> void {\n\n  x = 1 print(x)\n}");
  EXPECT_TRUE(ast_equal(a, b));
  EXPECT_FALSE(ast_equal(Stmt::assign("x", Expr::int_lit(1)),
                         Stmt::assign("x", Expr::int_lit(2))));
  EXPECT_FALSE(ast_equal(Expr::int_lit(1), Expr::float_lit(1.0)));
}

TEST(AstEqual, TwiceBlockInstancesAreIdentical) {
  auto seed = testing::load_seed("twice-block");
  std::map<int, std::vector<Stmt>> instances;
  for (const Stmt &s : seed.unstructured.main().body) {
    auto it = seed.annotation.instance_of.find(s.id);
    if (it != seed.annotation.instance_of.end())
      instances[it->second].push_back(s);
  }
  ASSERT_EQ(instances.size(), 2u);
  EXPECT_TRUE(ast_equal(instances[0], instances[1]));
}

TEST(Property, RandomProgramsRoundTrip) {
  RandomProgramGen gen(0x5eed);
  for (int k = 0; k < 300; ++k) {
    Program p = gen.any_program();
    std::string text = pretty_print(p);
    Program q;
    ASSERT_NO_THROW(q = parse(text)) << text;
    ASSERT_TRUE(ast_equal(p, q)) << text;
    EXPECT_EQ(pretty_print(q), text);
  }
}

TEST(Property, RenumberIsPreorderBijection) {
  RandomProgramGen gen(99);
  for (int k = 0; k < 100; ++k) {
    Program p = gen.any_program();
    std::int32_t expected = 0;
    for (const FuncDef &f : p.functions)
      for_each_stmt(std::span<const Stmt>(f.body),
                    [&](const Stmt &s) { EXPECT_EQ(to_int(s.id), expected++); });
  }
}

TEST(Property, AstEqualIsAnEquivalence) {
  RandomProgramGen gen(7);
  // Small depth so that independent draws collide often enough to exercise
  // the symmetric and transitive cases with true on both sides.
  std::vector<Expr> pool;
  for (int k = 0; k < 150; ++k)
    pool.push_back(gen.any_expr(1));
  int equal_pairs = 0;
  for (const Expr &a : pool) {
    EXPECT_TRUE(ast_equal(a, a));
    for (const Expr &b : pool) {
      bool ab = ast_equal(a, b);
      EXPECT_EQ(ab, ast_equal(b, a));
      if (!ab)
        continue;
      ++equal_pairs;
      for (const Expr &c : pool)
        if (ast_equal(b, c))
          EXPECT_TRUE(ast_equal(a, c));
    }
  }
  EXPECT_GT(equal_pairs, static_cast<int>(pool.size()));
}

TEST(Property, AstEqualIgnoresIdsAndPositions) {
  RandomProgramGen gen(11);
  for (int k = 0; k < 50; ++k) {
    Program p = gen.any_program();
    Program q = parse(pretty_print(p));
    for (FuncDef &f : q.functions)
      for_each_stmt(std::span<Stmt>(f.body), [](Stmt &s) {
        s.id = StmtId{to_int(s.id) + 1000};
        s.pos = {99, 99};
      });
    EXPECT_TRUE(ast_equal(p, q));
  }
}

} // namespace
} // namespace decomplab
