// Copyright 2026 The specdiff Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "specdiff/asl.h"

#include <gtest/gtest.h>

#include <string>

#include "specdiff/corpus.h"
#include "specdiff/errors.h"

namespace specdiff::asl {
namespace {

ParseContext str_ctx() {
  ParseContext ctx;
  ctx.symbols = {{"Rn", 4}, {"Rt", 4}, {"P", 1}, {"U", 1}, {"W", 1},
                 {"imm8", 8}};
  return ctx;
}

ParseContext vld4_ctx() {
  ParseContext ctx;
  ctx.symbols = {{"D", 1},    {"Rn", 4},   {"Vd", 4}, {"type", 4},
                 {"size", 2}, {"align", 2}, {"Rm", 4}};
  return ctx;
}

void expect_syntax_error(const std::string& text, const ParseContext& ctx,
                         const std::string& needle) {
  try {
    parse_program(text, ctx);
    FAIL() << "expected SyntaxError for: " << text;
  } catch (const SyntaxError& e) {
    EXPECT_NE(std::string(e.what()).find(needle), std::string::npos)
        << "message was: " << e.what();
  }
}

TEST(Parser, ExpressionPrecedence) {
  ParseContext ctx = str_ctx();
  // Multiplication binds tighter than addition; shifts tighter than
  // comparison; && tighter than ||.
  ExprPtr e = parse_expression("1 + 2 * 3", ctx);
  const auto* add = expr_as<Binary>(e);
  ASSERT_NE(add, nullptr);
  EXPECT_EQ(add->op, BinaryOp::kAdd);
  const auto* mul = expr_as<Binary>(add->rhs);
  ASSERT_NE(mul, nullptr);
  EXPECT_EQ(mul->op, BinaryOp::kMul);

  ExprPtr logic = parse_expression("P == '1' && U == '1' || W == '1'", ctx);
  const auto* orr = expr_as<Binary>(logic);
  ASSERT_NE(orr, nullptr);
  EXPECT_EQ(orr->op, BinaryOp::kOr);
  const auto* andd = expr_as<Binary>(orr->lhs);
  ASSERT_NE(andd, nullptr);
  EXPECT_EQ(andd->op, BinaryOp::kAnd);

  // Parentheses override.
  ExprPtr paren = parse_expression("(1 + 2) * 3", ctx);
  const auto* outer = expr_as<Binary>(paren);
  ASSERT_NE(outer, nullptr);
  EXPECT_EQ(outer->op, BinaryOp::kMul);
}

TEST(Parser, PrintParseRoundTripOnWholeCorpus) {
  // The printer emits text the parser accepts, reproducing the same tree.
  Corpus corpus = load_corpus(SPECDIFF_SOURCE_DIR "/corpus/baseline.corpus");
  ASSERT_FALSE(corpus.encodings.empty());
  for (const InstructionSpec& spec : corpus.encodings) {
    ParseContext ctx;
    for (const auto& [name, info] : spec.symbol_types) {
      ctx.symbols[name] = info.bit_length;
    }

    Program decode2 = parse_program(to_string(spec.decode), ctx);
    ASSERT_EQ(decode2.statements.size(), spec.decode.statements.size())
        << spec.id;
    for (std::size_t i = 0; i < decode2.statements.size(); ++i) {
      EXPECT_TRUE(equal(decode2.statements[i], spec.decode.statements[i]))
          << spec.id << " decode stmt " << i;
    }

    ParseContext exec_ctx = ctx;
    exec_ctx.allow_state_access = true;
    exec_ctx.prebound_vars = may_assign(spec.decode.statements);
    Program exec2 = parse_program(to_string(spec.execute), exec_ctx);
    ASSERT_EQ(exec2.statements.size(), spec.execute.statements.size())
        << spec.id;
    for (std::size_t i = 0; i < exec2.statements.size(); ++i) {
      EXPECT_TRUE(equal(exec2.statements[i], spec.execute.statements[i]))
          << spec.id << " execute stmt " << i;
    }
  }
}

TEST(Parser, DanglingElseBindsToNearestIf) {
  ParseContext ctx = str_ctx();
  Program p = parse_program(
      "if P == '1' then if U == '1' then x = 1; else x = 2;", ctx);
  ASSERT_EQ(p.statements.size(), 1u);
  const auto* outer = stmt_as<If>(p.statements[0]);
  ASSERT_NE(outer, nullptr);
  EXPECT_TRUE(outer->else_body.empty());
  ASSERT_EQ(outer->then_body.size(), 1u);
  const auto* inner = stmt_as<If>(outer->then_body[0]);
  ASSERT_NE(inner, nullptr);
  EXPECT_EQ(inner->then_body.size(), 1u);
  EXPECT_EQ(inner->else_body.size(), 1u);
}

TEST(Parser, CaseStatement) {
  ParseContext ctx = vld4_ctx();
  Program p = parse_program(
      "case type of when '0000' inc = 1; when '0001' inc = 2;", ctx);
  ASSERT_EQ(p.statements.size(), 1u);
  const auto* c = stmt_as<Case>(p.statements[0]);
  ASSERT_NE(c, nullptr);
  ASSERT_EQ(c->arms.size(), 2u);
  EXPECT_EQ(c->arms[0].pattern, "0000");
  EXPECT_EQ(c->arms[1].pattern, "0001");
  ASSERT_EQ(c->arms[0].body.size(), 1u);
  EXPECT_NE(stmt_as<Assign>(c->arms[0].body[0]), nullptr);
}

TEST(Parser, CasePatternWidthChecked) {
  expect_syntax_error("case type of when '000' inc = 1;", vld4_ctx(), "case");
}

TEST(Parser, CaseRequiresAtLeastOneArm) {
  expect_syntax_error("case type of", vld4_ctx(), "at least one arm");
}

TEST(Parser, ComparisonChainRejected) {
  ParseContext ctx = vld4_ctx();
  try {
    parse_expression("Rn == Vd == Rm", ctx);
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError& e) {
    EXPECT_NE(std::string(e.what()).find("comparison operators do not chain"),
              std::string::npos);
  }
}

TEST(Parser, ComparisonWidthMismatchRejected) {
  expect_syntax_error("x = Rn == '111';", vld4_ctx(), "widths");
}

TEST(Parser, BuiltinArityChecked) {
  try {
    parse_expression("UInt(D:Vd, 3)", vld4_ctx());
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError& e) {
    EXPECT_NE(std::string(e.what()).find("UInt expects 1 argument, got 2"),
              std::string::npos);
  }
  EXPECT_THROW(parse_expression("ZeroExtend(Vd)", vld4_ctx()), SyntaxError);
}

TEST(Parser, ConditionalExpressionDepthLimited) {
  ParseContext ctx = str_ctx();
  // One level of nesting is fine...
  EXPECT_NO_THROW(parse_expression(
      "if P == '1' then 1 else (if U == '1' then 2 else 3)", ctx));
  // ...two levels are rejected.
  try {
    parse_expression(
        "if P == '1' then 1 else (if U == '1' then 2 else (if W == '1' then "
        "3 else 4))",
        ctx);
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError& e) {
    EXPECT_NE(std::string(e.what()).find(
                  "conditional expression nested deeper than one level"),
              std::string::npos);
  }
}

TEST(Parser, UnknownIdentifier) {
  EXPECT_THROW(parse_expression("foo + 1", str_ctx()), UnknownIdentifier);
}

TEST(Parser, CannotAssignToSymbolOrBuiltin) {
  expect_syntax_error("Rn = 1;", str_ctx(), "cannot assign to encoding symbol");
  expect_syntax_error("UInt = 1;", str_ctx(), "cannot assign to builtin");
}

TEST(Parser, ReassigningAVariableIsAllowed) {
  ParseContext ctx;
  ctx.symbols = {{"sh", 1}, {"imm12", 12}};
  EXPECT_NO_THROW(parse_program(
      "imm = UInt(imm12); if sh == '1' then imm = imm << 12;", ctx));
}

TEST(Parser, StateAccessOnlyInExecutePrograms) {
  ParseContext decode_ctx = str_ctx();
  expect_syntax_error("x = R[1];", decode_ctx,
                      "register/memory access is not allowed in decode");
  expect_syntax_error("MemU[0, 4] = 1;", decode_ctx, "not allowed in decode");

  ParseContext exec_ctx = str_ctx();
  exec_ctx.allow_state_access = true;
  Program p = parse_program("MemU[UInt(imm8), 4] = R[UInt(Rt)];", exec_ctx);
  ASSERT_EQ(p.statements.size(), 1u);
  const auto* store = stmt_as<Store>(p.statements[0]);
  ASSERT_NE(store, nullptr);
  EXPECT_EQ(store->collection, "MemU");
  ASSERT_EQ(store->args.size(), 2u);
  EXPECT_NE(expr_as<Element>(store->value), nullptr);
}

TEST(Parser, UnknownCollectionRejected) {
  ParseContext ctx = str_ctx();
  ctx.allow_state_access = true;
  expect_syntax_error("x = Foo[1];", ctx, "unknown collection");
}

TEST(Parser, TerminatorStatements) {
  ParseContext ctx = str_ctx();
  Program p = parse_program("UNDEFINED; UNPREDICTABLE;", ctx);
  ASSERT_EQ(p.statements.size(), 2u);
  EXPECT_NE(stmt_as<UndefinedStmt>(p.statements[0]), nullptr);
  EXPECT_NE(stmt_as<UnpredictableStmt>(p.statements[1]), nullptr);
}

TEST(StaticWidth, BitTypedExpressions) {
  ParseContext ctx = vld4_ctx();
  EXPECT_EQ(static_width(parse_expression("'1011'", ctx)), 4);
  EXPECT_EQ(static_width(parse_expression("D:Vd", ctx)), 5);
  EXPECT_EQ(static_width(parse_expression("ZeroExtend(size, 32)", ctx)), 32);
  EXPECT_EQ(static_width(parse_expression("Rn", ctx)), 4);
  // Integer-valued expressions have no bit-string width.
  EXPECT_EQ(static_width(parse_expression("UInt(Rn)", ctx)), 0);
  EXPECT_EQ(static_width(parse_expression("1 + 2", ctx)), 0);
  EXPECT_EQ(static_width(parse_expression("Rn == Vd", ctx)), 0);
}

TEST(FreeNames, SymbolsVersusVariables) {
  ParseContext ctx = vld4_ctx();
  ctx.prebound_vars = {"d", "inc"};
  ExprPtr e = parse_expression("UInt(D:Vd) + d * inc", ctx);
  EXPECT_EQ(free_symbols(e), (std::set<std::string>{"D", "Vd"}));
  EXPECT_EQ(free_vars(e), (std::set<std::string>{"d", "inc"}));

  std::map<std::string, int> widths;
  collect_symbol_widths(e, &widths);
  EXPECT_EQ(widths, (std::map<std::string, int>{{"D", 1}, {"Vd", 4}}));
}

TEST(MayAssign, CoversAllBranches) {
  ParseContext ctx = str_ctx();
  Program p = parse_program(
      "if P == '1' then x = 1; else y = 2;"
      "case Rt of when '0000' z = 3;"
      "w = 4;",
      ctx);
  EXPECT_EQ(may_assign(p.statements),
            (std::set<std::string>{"x", "y", "z", "w"}));
}

TEST(Equality, StructuralNotTextual) {
  ParseContext ctx = str_ctx();
  ExprPtr a = parse_expression("UInt(Rn) + 1", ctx);
  ExprPtr b = parse_expression("UInt( Rn )+1", ctx);
  ExprPtr c = parse_expression("UInt(Rt) + 1", ctx);
  EXPECT_TRUE(equal(a, b));
  EXPECT_FALSE(equal(a, c));
}

TEST(Printer, StableExpressionText) {
  ParseContext ctx = str_ctx();
  ExprPtr a = parse_expression("Rn == '1111' || (P == '0' && W == '0')", ctx);
  // The printed form re-parses to an equal tree and prints identically.
  ExprPtr b = parse_expression(to_string(a), ctx);
  EXPECT_TRUE(equal(a, b));
  EXPECT_EQ(to_string(a), to_string(b));
}

TEST(Parser, SyntaxErrorCarriesLocation) {
  ParseContext ctx = str_ctx();
  ctx.first_line = 10;
  try {
    parse_program("x = 1;\ny = @;\n", ctx);
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 11);
  }
}

}  // namespace
}  // namespace specdiff::asl
