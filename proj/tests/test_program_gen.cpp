#include <gtest/gtest.h>

#include <functional>
#include <set>

#include "fixtures.hpp"
#include "fpdiff/ast_json.hpp"
#include "fpdiff/error.hpp"
#include "fpdiff/program_gen.hpp"
#include "support.hpp"

using namespace fpdiff;

namespace {

GenConfig cfg(std::uint64_t seed, Precision p = Precision::FP64) { return GenConfig::for_precision(p, seed); }

void walk(const std::vector<Stmt>& body, const std::function<void(const Stmt&)>& on_stmt,
          const std::function<void(const Expr&)>& on_expr) {
  std::function<void(const Expr&)> ex = [&](const Expr& e) {
    on_expr(e);
    for (const auto& a : e.args) ex(a);
  };
  for (const Stmt& s : body) {
    on_stmt(s);
    if (s.kind == Stmt::Kind::IfBlock) ex(s.lhs);
    if (s.kind != Stmt::Kind::ForLoop && s.kind != Stmt::Kind::PrintComp) ex(s.rhs);
    walk(s.body, on_stmt, on_expr);
  }
}

}  // namespace

TEST(ProgramGen, SameSeedSameProgram) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const ProgramAst a = generate_program(cfg(seed));
    const ProgramAst b = generate_program(cfg(seed));
    ASSERT_EQ(a, b) << "seed " << seed;
    ASSERT_EQ(ast_to_json(a).dump(), ast_to_json(b).dump());
  }
}

TEST(ProgramGen, SeedsProduceDifferentPrograms) {
  std::set<std::string> sigs;
  for (std::uint64_t seed = 0; seed < 200; ++seed) sigs.insert(ast_signature(generate_program(cfg(seed))));
  EXPECT_GT(sigs.size(), 190u);
}

TEST(ProgramGen, GeneratedProgramsPassValidator) {
  for (auto p : {Precision::FP64, Precision::FP32}) {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      const GenConfig c = cfg(seed, p);
      const auto errors = support::validate_ast(generate_program(c), support::Limits::of(c));
      ASSERT_TRUE(errors.empty()) << "seed " << seed << ": " << errors.front();
    }
  }
}

TEST(ProgramGen, ValidatorRejectsBrokenPrograms) {
  const support::Limits wide{Precision::FP64, 3, 8, 40, {"cos", "sqrt", "fmod", "ceil", "cosh", "fabs"}};
  ProgramAst p = fixtures::guarded_loop_kernel();
  EXPECT_TRUE(support::validate_ast(p, wide).empty());

  ProgramAst no_print = p;
  no_print.body.pop_back();
  EXPECT_FALSE(support::validate_ast(no_print, wide).empty());

  ProgramAst unbound = p;
  unbound.body.insert(unbound.body.begin(), Stmt::accumulate(AccumOp::AddAssign, Expr::var("tmp_9")));
  EXPECT_FALSE(support::validate_ast(unbound, wide).empty());

  ProgramAst bad_bound = p;
  bad_bound.body.insert(bad_bound.body.begin(),
                        Stmt::for_loop("var_2", "i", {Stmt::accumulate(AccumOp::AddAssign, Expr::comp())}));
  EXPECT_FALSE(support::validate_ast(bad_bound, wide).empty());
}

TEST(ProgramGen, FixturesAreWellFormed) {
  const support::Limits wide{Precision::FP64, 3, 8, 40, {"cos", "sqrt", "fmod", "ceil", "cosh", "fabs"}};
  for (const auto& p : {fixtures::guarded_loop_kernel(), fixtures::subnormal_array_kernel(), fixtures::ceil_divide_kernel(), fixtures::cosh_guard_kernel()}) {
    const auto errors = support::validate_ast(p, wide);
    EXPECT_TRUE(errors.empty()) << errors.front();
  }
}

TEST(ProgramGen, EveryProductionIsObserved) {
  support::ProductionCensus census;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) census.add(generate_program(cfg(seed)));
  EXPECT_TRUE(census.missing().empty()) << census.missing().front();
  EXPECT_EQ(census.fns.size(), math_catalog().size());
}

TEST(ProgramGen, LoopNestingRespectsBound) {
  for (int limit : {1, 2, 3}) {
    int deepest = 0;
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
      GenConfig c = cfg(seed);
      c.max_loop_nesting = limit;
      const ProgramAst ast = generate_program(c);
      const int d = loop_depth(ast);
      ASSERT_LE(d, limit) << "seed " << seed;
      ASSERT_TRUE(support::validate_ast(ast, support::Limits::of(c)).empty());
      deepest = std::max(deepest, d);
    }
    EXPECT_EQ(deepest, limit) << "limit never reached";
  }
}

TEST(ProgramGen, NoLoopsWhenNestingIsZero) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    GenConfig c = cfg(seed);
    c.max_loop_nesting = 0;
    EXPECT_EQ(loop_depth(generate_program(c)), 0);
  }
}

TEST(ProgramGen, DegenerateConfigs) {
  GenConfig empty = cfg(1);
  empty.max_stmts_per_block = 0;
  const ProgramAst p = generate_program(empty);
  ASSERT_EQ(p.body.size(), 1u);
  EXPECT_EQ(p.body[0].kind, Stmt::Kind::PrintComp);

  GenConfig bare = cfg(2);
  bare.num_fp_params = 0;
  bare.num_int_params = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    bare.seed = seed;
    const ProgramAst q = generate_program(bare);
    EXPECT_EQ(q.params.size(), 1u);
    EXPECT_EQ(loop_depth(q), 0);
    EXPECT_TRUE(support::validate_ast(q, support::Limits::of(bare)).empty());
  }

  GenConfig no_math = cfg(3);
  no_math.math_fn_set.clear();
  no_math.math_call_probability = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    no_math.seed = seed;
    EXPECT_FALSE(uses_math_calls(generate_program(no_math)));
  }
}

TEST(ProgramGen, InvalidConfigsThrow) {
  GenConfig c = cfg(0);
  c.literal_exponent_range = {-400, 10};
  EXPECT_THROW(generate_program(c), ConfigError);

  GenConfig f = cfg(0, Precision::FP32);
  f.literal_exponent_range = {-323, 308};
  EXPECT_THROW(generate_program(f), ConfigError);

  GenConfig unknown = cfg(0);
  unknown.math_fn_set.push_back("erfc");
  EXPECT_THROW(generate_program(unknown), ConfigError);

  GenConfig neg = cfg(0);
  neg.max_loop_nesting = -1;
  EXPECT_THROW(validate(neg), ConfigError);

  GenConfig bounds = cfg(0);
  bounds.loop_bound_range = {5, 2};
  EXPECT_THROW(validate(bounds), ConfigError);

  GenConfig nomath = cfg(0);
  nomath.math_fn_set.clear();
  EXPECT_THROW(validate(nomath), ConfigError);
}

TEST(ProgramGen, Fp32UsesSuffixedSpellings) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const GenConfig c = cfg(seed, Precision::FP32);
    const ProgramAst ast = generate_program(c);
    walk(
        ast.body, [](const Stmt&) {},
        [&](const Expr& e) {
          if (e.kind == Expr::Kind::MathCall) {
            ASSERT_EQ(e.name.back(), 'f') << e.name;
          }
          if (e.kind == Expr::Kind::Literal) {
            const std::string text = e.literal.render(Precision::FP32);
            ASSERT_EQ(text.back(), 'F') << text;
            if (!e.literal.is_zero()) {
              ASSERT_GE(e.literal.exponent, -45);
              ASSERT_LE(e.literal.exponent, 38);
            }
          }
        });
  }
}

TEST(ProgramGen, LiteralRendering) {
  using fixtures::L;
  EXPECT_EQ(L("+1.3305E12").render(Precision::FP64), "+1.3305E12");
  EXPECT_EQ(L("-1.7744E-2").render(Precision::FP64), "-1.7744E-2");
  EXPECT_EQ(L("+1.4014E2").render(Precision::FP32), "+1.4014E2F");
  EXPECT_EQ(L("-0.0").render(Precision::FP64), "-0.0");
  EXPECT_EQ(L("+0.0").render(Precision::FP32), "+0.0F");
  EXPECT_TRUE(L("+0.0").is_zero());
  EXPECT_EQ(L("+1.7085E-315").value(Precision::FP64), 1.7085e-315);
  EXPECT_EQ(L("+1.4014E2").value(Precision::FP32), static_cast<double>(140.14f));
}

TEST(ProgramGen, SampledLiteralsAreNonzeroAndFinite) {
  for (auto p : {Precision::FP64, Precision::FP32}) {
    const GenConfig c = cfg(0, p);
    Rng rng(99);
    for (int i = 0; i < 20000; ++i) {
      const Literal l = sample_literal(c, rng);
      const double v = l.value(p);
      ASSERT_TRUE(std::isfinite(v) && v != 0.0) << l.render(p);
      ASSERT_TRUE(c.literal_exponent_range.contains(l.exponent));
    }
  }
}

TEST(ProgramGen, SignaturesOfDistinctProgramsDiffer) {
  std::vector<ProgramAst> asts;
  std::vector<std::string> sigs;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    asts.push_back(generate_program(cfg(seed)));
    sigs.push_back(ast_signature(asts.back()));
  }
  std::size_t collisions = 0;
  for (std::size_t i = 0; i < sigs.size(); ++i) {
    for (std::size_t j = i + 1; j < sigs.size(); ++j) {
      if (sigs[i] == sigs[j] && !(asts[i] == asts[j])) ++collisions;
    }
  }
  EXPECT_EQ(collisions, 0u);
}

TEST(ProgramGen, OneDigitChangesSignature) {
  ProgramAst a = fixtures::guarded_loop_kernel();
  ProgramAst b = a;
  b.body[0].body[0].rhs.args[0].literal.fraction = "3306";
  EXPECT_NE(ast_signature(a), ast_signature(b));
  EXPECT_EQ(ast_signature(a), ast_signature(fixtures::guarded_loop_kernel()));
  EXPECT_EQ(ast_signature(a).size(), 17u);
}

TEST(ProgramGen, AstJsonRoundTrip) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const ProgramAst a = generate_program(cfg(seed, seed % 2 ? Precision::FP32 : Precision::FP64));
    const auto j = ast_to_json(a);
    EXPECT_EQ(ast_from_json(j), a);
    EXPECT_EQ(ast_to_json(ast_from_json(j)).dump(), j.dump());
  }
  for (const auto& f : {fixtures::subnormal_array_kernel(), fixtures::cosh_guard_kernel()}) EXPECT_EQ(ast_from_json(ast_to_json(f)), f);
}

TEST(ProgramGen, ConfigJsonRoundTrip) {
  GenConfig c = cfg(12345, Precision::FP32);
  c.max_loop_nesting = 2;
  c.allow_nested_if = true;
  EXPECT_EQ(config_from_json(config_to_json(c)), c);
}
