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
//
// Abstract syntax tree, parser and printer for the decode/execute
// pseudocode subset used by corpus files.
//
// Nodes are immutable and shared through shared_ptr<const T>, so slices and
// rewritten constraints can alias subtrees of the original program safely,
// including across threads.

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace specdiff::asl {

struct Expr;
struct Stmt;
using ExprPtr = std::shared_ptr<const Expr>;
using StmtPtr = std::shared_ptr<const Stmt>;

enum class BinaryOp {
  kAdd,
  kSub,
  kMul,
  kDiv,  // flooring integer division (the DIV keyword)
  kShl,
  kEq,
  kNe,
  kLt,
  kGt,
  kLe,
  kGe,
  kAnd,
  kOr,
};

enum class Builtin { kUInt, kSInt, kZeroExtend, kSignExtend };

// Reference to an encoding symbol field (or to an auxiliary symbol
// introduced when a case-defined variable is lifted into the constraint
// language). `width` is the symbol's bit width.
struct SymbolRef {
  std::string name;
  int width = 0;
};

// Reference to a variable assigned earlier in the same program.
struct VarRef {
  std::string name;
};

// Bit-string literal, e.g. '1111'. Stored as written; value() gives the
// unsigned integer reading.
struct BitLit {
  std::string bits;

  int width() const { return static_cast<int>(bits.size()); }
  std::uint64_t value() const {
    std::uint64_t v = 0;
    for (char c : bits) v = (v << 1) | static_cast<std::uint64_t>(c == '1');
    return v;
  }
};

struct IntLit {
  std::int64_t value = 0;
};

// Bit-string concatenation a:b.
struct Concat {
  ExprPtr lhs;
  ExprPtr rhs;
};

// Builtin call. Arity is checked at parse time (UInt/SInt take one
// argument, ZeroExtend/SignExtend take two).
struct Call {
  Builtin fn;
  std::vector<ExprPtr> args;
};

struct Binary {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};

struct Not {
  ExprPtr operand;
};

// Conditional expression `if c then a else b`. The parser permits one
// level of nesting and rejects deeper chains.
struct IfExpr {
  ExprPtr cond;
  ExprPtr then_value;
  ExprPtr else_value;
};

// Indexed read of an architectural collection, e.g. R[n] or MemU[addr,4].
// These may appear in execute-phase programs; they are carried through
// analysis opaquely and are not concretely evaluable.
struct Element {
  std::string collection;
  std::vector<ExprPtr> args;
};

struct Expr {
  using Node = std::variant<SymbolRef, VarRef, BitLit, IntLit, Concat, Call,
                            Binary, Not, IfExpr, Element>;
  Node node;
};

template <typename T>
const T* expr_as(const ExprPtr& e) {
  return e ? std::get_if<T>(&e->node) : nullptr;
}

template <typename T>
ExprPtr make_expr(T node) {
  return std::make_shared<const Expr>(Expr{Expr::Node{std::move(node)}});
}

// ---------------------------------------------------------------------------
// Statements

struct Assign {
  std::string name;
  ExprPtr value;
};

struct If {
  ExprPtr cond;
  std::vector<StmtPtr> then_body;
  std::vector<StmtPtr> else_body;  // empty when there is no else
};

struct CaseArm {
  std::string pattern;  // bit-string, width-checked against the scrutinee
  std::vector<StmtPtr> body;
};

struct Case {
  ExprPtr scrutinee;
  std::vector<CaseArm> arms;
};

struct UndefinedStmt {};
struct UnpredictableStmt {};

// Write to an architectural collection, e.g. MemU[address,4] = R[t].
struct Store {
  std::string collection;
  std::vector<ExprPtr> args;
  ExprPtr value;
};

struct Stmt {
  using Node =
      std::variant<Assign, If, Case, UndefinedStmt, UnpredictableStmt, Store>;
  Node node;
};

template <typename T>
const T* stmt_as(const StmtPtr& s) {
  return s ? std::get_if<T>(&s->node) : nullptr;
}

template <typename T>
StmtPtr make_stmt(T node) {
  return std::make_shared<const Stmt>(Stmt{Stmt::Node{std::move(node)}});
}

struct Program {
  std::vector<StmtPtr> statements;
};

// ---------------------------------------------------------------------------
// Parsing

struct ParseContext {
  // Encoding symbol name -> bit width. Identifiers found here parse as
  // SymbolRef.
  std::map<std::string, int> symbols;
  // Variables that are already bound when the program starts (used when
  // parsing an execute program with the decode program's assignments in
  // scope).
  std::set<std::string> prebound_vars;
  // Collections that may be indexed (defaults cover the architectural
  // state touched by execute programs).
  std::set<std::string> collections = {"R", "MemU", "MemA", "Q", "D", "S"};
  // 1-based line number of the program's first line within its container
  // file, so diagnostics point at the right place.
  int first_line = 1;
  // Execute programs may contain Element reads and Store statements;
  // decode programs may not (they must stay concretely evaluable).
  bool allow_state_access = false;
};

// Parses a whole decode/execute program. Performs arity checks,
// identifier resolution (SyntaxError / UnknownIdentifier on failure) and
// the nesting-depth check for conditional expressions.
Program parse_program(const std::string& text, const ParseContext& ctx);

// Parses a single expression (used by tests and by constraint tooling).
ExprPtr parse_expression(const std::string& text, const ParseContext& ctx);

// ---------------------------------------------------------------------------
// Printing and structural equality

std::string to_string(const ExprPtr& e);
std::string to_string(const StmtPtr& s);
std::string to_string(const Program& p);

bool equal(const ExprPtr& a, const ExprPtr& b);
bool equal(const StmtPtr& a, const StmtPtr& b);

// Free variable names (VarRef, not SymbolRef) of an expression.
std::set<std::string> free_vars(const ExprPtr& e);
// Encoding/auxiliary symbol names of an expression.
std::set<std::string> free_symbols(const ExprPtr& e);
// Symbol name -> width for every SymbolRef in the expression.
void collect_symbol_widths(const ExprPtr& e, std::map<std::string, int>* out);

// Variable names that some statement in `body` may assign (directly or in
// any nested branch).
std::set<std::string> may_assign(const std::vector<StmtPtr>& body);

// Static bit width of an expression, or 0 when it has no bit-string type
// (plain integers, comparisons, arithmetic).
int static_width(const ExprPtr& e);

}  // namespace specdiff::asl
