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

#include "specdiff/analysis.h"

#include <algorithm>
#include <optional>
#include <set>

#include "specdiff/errors.h"
#include "specdiff/eval.h"

namespace specdiff {

using asl::Expr;
using asl::ExprPtr;
using asl::Stmt;
using asl::StmtPtr;

namespace {

bool is_comparison(const ExprPtr& e) {
  const auto* b = asl::expr_as<asl::Binary>(e);
  if (!b) return false;
  switch (b->op) {
    case asl::BinaryOp::kEq:
    case asl::BinaryOp::kNe:
    case asl::BinaryOp::kLt:
    case asl::BinaryOp::kGt:
    case asl::BinaryOp::kLe:
    case asl::BinaryOp::kGe:
      return true;
    default:
      return false;
  }
}

// Outermost comparison nodes of an expression, left to right.
void collect_atoms(const ExprPtr& e, std::vector<ExprPtr>* out) {
  if (is_comparison(e)) {
    out->push_back(e);
    return;
  }
  struct V {
    std::vector<ExprPtr>* out;
    void operator()(const asl::SymbolRef&) {}
    void operator()(const asl::VarRef&) {}
    void operator()(const asl::BitLit&) {}
    void operator()(const asl::IntLit&) {}
    void operator()(const asl::Concat& n) {
      collect_atoms(n.lhs, out);
      collect_atoms(n.rhs, out);
    }
    void operator()(const asl::Call& n) {
      for (const auto& a : n.args) collect_atoms(a, out);
    }
    void operator()(const asl::Binary& n) {
      collect_atoms(n.lhs, out);
      collect_atoms(n.rhs, out);
    }
    void operator()(const asl::Not& n) { collect_atoms(n.operand, out); }
    void operator()(const asl::IfExpr& n) {
      collect_atoms(n.cond, out);
      collect_atoms(n.then_value, out);
      collect_atoms(n.else_value, out);
    }
    void operator()(const asl::Element& n) {
      for (const auto& a : n.args) collect_atoms(a, out);
    }
  };
  std::visit(V{out}, e->node);
}

struct Extractor {
  std::vector<Constraint> sites;
  std::set<std::string> seen;

  std::string key(const ExprPtr& atom, const std::vector<ExprPtr>& path) {
    std::string k = asl::to_string(atom);
    for (const auto& p : path) {
      k += '\x1f';
      k += asl::to_string(p);
    }
    return k;
  }

  void emit(const ExprPtr& atom, const std::vector<ExprPtr>& path) {
    if (!seen.insert(key(atom, path)).second) return;
    Constraint c;
    c.expr = atom;
    c.polarity = Polarity::kAssert;
    c.path = path;
    sites.push_back(std::move(c));
  }

  void emit_from_expr(const ExprPtr& e, const std::vector<ExprPtr>& path) {
    std::vector<ExprPtr> atoms;
    collect_atoms(e, &atoms);
    for (const auto& a : atoms) emit(a, path);
  }

  void walk(const std::vector<StmtPtr>& body, std::vector<ExprPtr>* path) {
    for (const auto& s : body) {
      if (const auto* a = asl::stmt_as<asl::Assign>(s)) {
        emit_from_expr(a->value, *path);
        continue;
      }
      if (const auto* st = asl::stmt_as<asl::Store>(s)) {
        for (const auto& arg : st->args) emit_from_expr(arg, *path);
        emit_from_expr(st->value, *path);
        continue;
      }
      if (const auto* i = asl::stmt_as<asl::If>(s)) {
        emit_from_expr(i->cond, *path);
        path->push_back(i->cond);
        walk(i->then_body, path);
        path->pop_back();
        if (!i->else_body.empty()) {
          path->push_back(asl::make_expr(asl::Not{i->cond}));
          walk(i->else_body, path);
          path->pop_back();
        }
        continue;
      }
      if (const auto* c = asl::stmt_as<asl::Case>(s)) {
        for (const auto& arm : c->arms) {
          ExprPtr atom = asl::make_expr(asl::Binary{
              asl::BinaryOp::kEq, c->scrutinee,
              asl::make_expr(asl::BitLit{arm.pattern})});
          emit(atom, *path);
          path->push_back(atom);
          walk(arm.body, path);
          path->pop_back();
        }
        continue;
      }
      // UNDEFINED / UNPREDICTABLE carry no comparisons.
    }
  }
};

}  // namespace

std::vector<Constraint> extract_constraints(
    const std::vector<StmtPtr>& statements) {
  Extractor ex;
  std::vector<ExprPtr> path;
  ex.walk(statements, &path);
  return ex.sites;
}

// ---------------------------------------------------------------------------
// Backward slicing

namespace {

void add_all(const std::set<std::string>& from, std::set<std::string>* to) {
  to->insert(from.begin(), from.end());
}

std::vector<StmtPtr> slice_body(const std::vector<StmtPtr>& body,
                                std::set<std::string>* needed);

// Returns the filtered statement (nullptr when irrelevant) and updates the
// needed-variable set for the statements that precede it.
StmtPtr slice_stmt(const StmtPtr& s, std::set<std::string>* needed) {
  if (const auto* a = asl::stmt_as<asl::Assign>(s)) {
    if (!needed->count(a->name)) return nullptr;
    needed->erase(a->name);
    add_all(asl::free_vars(a->value), needed);
    return s;
  }
  if (const auto* i = asl::stmt_as<asl::If>(s)) {
    std::set<std::string> need_then = *needed;
    std::set<std::string> need_else = *needed;
    std::vector<StmtPtr> then_f = slice_body(i->then_body, &need_then);
    std::vector<StmtPtr> else_f = slice_body(i->else_body, &need_else);
    if (then_f.empty() && else_f.empty()) return nullptr;
    // Branches are alternatives: a variable stays needed unless both
    // branches definitely assigned it.
    std::set<std::string> merged;
    add_all(need_then, &merged);
    add_all(need_else, &merged);
    add_all(asl::free_vars(i->cond), &merged);
    *needed = std::move(merged);
    return asl::make_stmt(asl::If{i->cond, std::move(then_f),
                                  std::move(else_f)});
  }
  if (const auto* c = asl::stmt_as<asl::Case>(s)) {
    std::set<std::string> merged;
    std::vector<asl::CaseArm> kept;
    for (const auto& arm : c->arms) {
      std::set<std::string> need_arm = *needed;
      std::vector<StmtPtr> body_f = slice_body(arm.body, &need_arm);
      add_all(need_arm, &merged);
      if (!body_f.empty()) kept.push_back({arm.pattern, std::move(body_f)});
    }
    if (kept.empty()) return nullptr;
    add_all(asl::free_vars(c->scrutinee), &merged);
    *needed = std::move(merged);
    return asl::make_stmt(asl::Case{c->scrutinee, std::move(kept)});
  }
  // Stores and UNDEFINED / UNPREDICTABLE define no variables.
  return nullptr;
}

std::vector<StmtPtr> slice_body(const std::vector<StmtPtr>& body,
                                std::set<std::string>* needed) {
  std::vector<StmtPtr> kept;
  for (auto it = body.rbegin(); it != body.rend(); ++it) {
    if (StmtPtr f = slice_stmt(*it, needed)) kept.push_back(std::move(f));
  }
  std::reverse(kept.begin(), kept.end());
  return kept;
}

}  // namespace

std::vector<StmtPtr> backward_slice(const std::vector<StmtPtr>& statements,
                                    const ExprPtr& target) {
  std::set<std::string> needed = asl::free_vars(target);
  return slice_body(statements, &needed);
}

// ---------------------------------------------------------------------------
// Symbolization

namespace {

int bits_for(std::int64_t max_value) {
  int bits = 1;
  while (max_value >= (std::int64_t{1} << bits) && bits < 63) ++bits;
  return bits;
}

ExprPtr simplify(const ExprPtr& e);

std::optional<std::int64_t> const_value(const ExprPtr& e) {
  if (const auto* i = asl::expr_as<asl::IntLit>(e)) return i->value;
  if (const auto* b = asl::expr_as<asl::BitLit>(e)) {
    return static_cast<std::int64_t>(b->value());
  }
  return std::nullopt;
}

// Rewrites the operand of UInt into plain integer arithmetic where the
// structure allows it: UInt(a:b) = UInt(b) + 2^width(b) * UInt(a).
ExprPtr expand_uint(const ExprPtr& e) {
  if (const auto* c = asl::expr_as<asl::Concat>(e)) {
    int rw = asl::static_width(c->rhs);
    if (rw > 0 && rw < 63) {
      ExprPtr low = expand_uint(c->rhs);
      ExprPtr high = expand_uint(c->lhs);
      return simplify(asl::make_expr(asl::Binary{
          asl::BinaryOp::kAdd, low,
          asl::make_expr(asl::Binary{
              asl::BinaryOp::kMul,
              asl::make_expr(asl::IntLit{std::int64_t{1} << rw}), high})}));
    }
  }
  if (const auto* b = asl::expr_as<asl::BitLit>(e)) {
    return asl::make_expr(asl::IntLit{static_cast<std::int64_t>(b->value())});
  }
  if (asl::expr_as<asl::SymbolRef>(e) || asl::expr_as<asl::IntLit>(e)) {
    return e;
  }
  if (const auto* call = asl::expr_as<asl::Call>(e)) {
    // ZeroExtend only changes the width, never the value.
    if (call->fn == asl::Builtin::kZeroExtend) {
      return expand_uint(call->args[0]);
    }
  }
  return asl::make_expr(asl::Call{asl::Builtin::kUInt, {e}});
}

ExprPtr fold_binary(asl::BinaryOp op, const ExprPtr& l, const ExprPtr& r,
                    const ExprPtr& original) {
  auto lv = const_value(l);
  auto rv = const_value(r);
  if (!lv || !rv) return original;
  std::int64_t a = *lv, b = *rv;
  std::int64_t out;
  switch (op) {
    case asl::BinaryOp::kAdd: out = a + b; break;
    case asl::BinaryOp::kSub: out = a - b; break;
    case asl::BinaryOp::kMul: out = a * b; break;
    case asl::BinaryOp::kDiv: {
      if (b == 0) return original;  // leave for runtime diagnosis
      std::int64_t q = a / b;
      if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
      out = q;
      break;
    }
    case asl::BinaryOp::kShl:
      if (b < 0 || b > 62) return original;
      out = a << b;
      break;
    case asl::BinaryOp::kEq: out = a == b; break;
    case asl::BinaryOp::kNe: out = a != b; break;
    case asl::BinaryOp::kLt: out = a < b; break;
    case asl::BinaryOp::kGt: out = a > b; break;
    case asl::BinaryOp::kLe: out = a <= b; break;
    case asl::BinaryOp::kGe: out = a >= b; break;
    case asl::BinaryOp::kAnd: out = (a != 0) && (b != 0); break;
    case asl::BinaryOp::kOr: out = (a != 0) || (b != 0); break;
    default: return original;
  }
  return asl::make_expr(asl::IntLit{out});
}

ExprPtr simplify(const ExprPtr& e) {
  struct V {
    const ExprPtr& e;
    ExprPtr operator()(const asl::SymbolRef&) { return e; }
    ExprPtr operator()(const asl::VarRef&) { return e; }
    ExprPtr operator()(const asl::BitLit&) { return e; }
    ExprPtr operator()(const asl::IntLit&) { return e; }
    ExprPtr operator()(const asl::Concat& n) {
      ExprPtr l = simplify(n.lhs);
      ExprPtr r = simplify(n.rhs);
      if (l == n.lhs && r == n.rhs) return e;
      return asl::make_expr(asl::Concat{l, r});
    }
    ExprPtr operator()(const asl::Call& n) {
      std::vector<ExprPtr> args;
      args.reserve(n.args.size());
      for (const auto& a : n.args) args.push_back(simplify(a));
      if (n.fn == asl::Builtin::kUInt) {
        return expand_uint(args[0]);
      }
      return asl::make_expr(asl::Call{n.fn, std::move(args)});
    }
    ExprPtr operator()(const asl::Binary& n) {
      ExprPtr l = simplify(n.lhs);
      ExprPtr r = simplify(n.rhs);
      ExprPtr node = (l == n.lhs && r == n.rhs)
                         ? e
                         : asl::make_expr(asl::Binary{n.op, l, r});
      return fold_binary(n.op, l, r, node);
    }
    ExprPtr operator()(const asl::Not& n) {
      ExprPtr x = simplify(n.operand);
      if (auto v = const_value(x)) {
        return asl::make_expr(asl::IntLit{*v == 0 ? 1 : 0});
      }
      return x == n.operand ? e : asl::make_expr(asl::Not{x});
    }
    ExprPtr operator()(const asl::IfExpr& n) {
      ExprPtr c = simplify(n.cond);
      ExprPtr t = simplify(n.then_value);
      ExprPtr f = simplify(n.else_value);
      if (auto v = const_value(c)) return *v != 0 ? t : f;
      if (c == n.cond && t == n.then_value && f == n.else_value) return e;
      return asl::make_expr(asl::IfExpr{c, t, f});
    }
    ExprPtr operator()(const asl::Element& n) {
      std::vector<ExprPtr> args;
      args.reserve(n.args.size());
      for (const auto& a : n.args) args.push_back(simplify(a));
      return asl::make_expr(asl::Element{n.collection, std::move(args)});
    }
  };
  return std::visit(V{e}, e->node);
}

struct SymEnv {
  std::map<std::string, ExprPtr> defs;
  std::map<std::string, std::vector<AuxChoice>> aux;
  std::vector<ExprPtr> side;
};

ExprPtr substitute(const ExprPtr& e, const SymEnv& env) {
  struct V {
    const ExprPtr& e;
    const SymEnv& env;
    ExprPtr operator()(const asl::SymbolRef&) { return e; }
    ExprPtr operator()(const asl::VarRef& n) {
      auto it = env.defs.find(n.name);
      if (it == env.defs.end()) {
        throw SymbolizeError("cannot resolve variable '" + n.name +
                             "' to encoding symbols (incomplete slice or "
                             "use before definition)");
      }
      return it->second;
    }
    ExprPtr operator()(const asl::BitLit&) { return e; }
    ExprPtr operator()(const asl::IntLit&) { return e; }
    ExprPtr operator()(const asl::Concat& n) {
      return asl::make_expr(
          asl::Concat{substitute(n.lhs, env), substitute(n.rhs, env)});
    }
    ExprPtr operator()(const asl::Call& n) {
      std::vector<ExprPtr> args;
      for (const auto& a : n.args) args.push_back(substitute(a, env));
      return asl::make_expr(asl::Call{n.fn, std::move(args)});
    }
    ExprPtr operator()(const asl::Binary& n) {
      return asl::make_expr(asl::Binary{n.op, substitute(n.lhs, env),
                                        substitute(n.rhs, env)});
    }
    ExprPtr operator()(const asl::Not& n) {
      return asl::make_expr(asl::Not{substitute(n.operand, env)});
    }
    ExprPtr operator()(const asl::IfExpr& n) {
      return asl::make_expr(asl::IfExpr{substitute(n.cond, env),
                                        substitute(n.then_value, env),
                                        substitute(n.else_value, env)});
    }
    ExprPtr operator()(const asl::Element& n) {
      std::vector<ExprPtr> args;
      for (const auto& a : n.args) args.push_back(substitute(a, env));
      return asl::make_expr(asl::Element{n.collection, std::move(args)});
    }
  };
  return std::visit(V{e, env}, e->node);
}

void process_body(const std::vector<StmtPtr>& body, SymEnv* env);

void process_stmt(const StmtPtr& s, SymEnv* env) {
  if (const auto* a = asl::stmt_as<asl::Assign>(s)) {
    env->defs[a->name] = simplify(substitute(a->value, *env));
    return;
  }
  if (const auto* c = asl::stmt_as<asl::Case>(s)) {
    ExprPtr scrutinee = simplify(substitute(c->scrutinee, *env));
    std::string source_symbol;
    if (const auto* sym = asl::expr_as<asl::SymbolRef>(scrutinee)) {
      source_symbol = sym->name;
    }
    std::set<std::string> vars;
    for (const auto& arm : c->arms) {
      auto a2 = asl::may_assign(arm.body);
      vars.insert(a2.begin(), a2.end());
    }
    for (const auto& v : vars) {
      if (env->aux.count(v)) {
        throw SymbolizeError("variable '" + v +
                             "' is case-defined more than once");
      }
      std::vector<AuxChoice> choices;
      std::int64_t max_value = 0;
      for (const auto& arm : c->arms) {
        for (const auto& stmt : arm.body) {
          const auto* assign = asl::stmt_as<asl::Assign>(stmt);
          if (!assign || assign->name != v) continue;
          ExprPtr value = simplify(substitute(assign->value, *env));
          auto cv = const_value(value);
          if (!cv) {
            throw SymbolizeError(
                "case arm assigns '" + v + "' a non-constant value '" +
                asl::to_string(value) + "'; cannot lift it to a symbol");
          }
          if (*cv < 0) {
            throw SymbolizeError("case arm assigns '" + v +
                                 "' a negative value");
          }
          choices.push_back({*cv, scrutinee, source_symbol, arm.pattern});
          max_value = std::max(max_value, *cv);
        }
      }
      if (choices.empty()) continue;
      int width = bits_for(max_value);
      ExprPtr aux_ref = asl::make_expr(asl::SymbolRef{v, width});
      ExprPtr admissible;
      for (const auto& choice : choices) {
        ExprPtr eq = asl::make_expr(
            asl::Binary{asl::BinaryOp::kEq, aux_ref,
                        asl::make_expr(asl::IntLit{choice.value})});
        admissible = admissible
                         ? asl::make_expr(
                               asl::Binary{asl::BinaryOp::kOr, admissible, eq})
                         : eq;
      }
      env->defs[v] = aux_ref;
      env->aux[v] = std::move(choices);
      env->side.push_back(admissible);
    }
    return;
  }
  if (const auto* i = asl::stmt_as<asl::If>(s)) {
    ExprPtr cond = simplify(substitute(i->cond, *env));
    SymEnv env_then = *env;
    SymEnv env_else = *env;
    process_body(i->then_body, &env_then);
    process_body(i->else_body, &env_else);
    std::set<std::string> assigned = asl::may_assign(i->then_body);
    auto else_assigned = asl::may_assign(i->else_body);
    assigned.insert(else_assigned.begin(), else_assigned.end());
    for (const auto& v : assigned) {
      auto t = env_then.defs.find(v);
      auto f = env_else.defs.find(v);
      if (t == env_then.defs.end() || f == env_else.defs.end()) {
        throw SymbolizeError("variable '" + v +
                             "' is assigned on only one branch and has no "
                             "prior definition");
      }
      env->defs[v] = asl::equal(t->second, f->second)
                         ? t->second
                         : simplify(asl::make_expr(
                               asl::IfExpr{cond, t->second, f->second}));
    }
    // Auxiliary definitions introduced inside a branch would be
    // conditionally scoped; the corpus subset does not produce them.
    if (env_then.aux.size() != env->aux.size() ||
        env_else.aux.size() != env->aux.size()) {
      throw SymbolizeError(
          "case statement nested in a conditional branch is not supported");
    }
    return;
  }
  // Stores and UNDEFINED / UNPREDICTABLE do not define variables.
}

void process_body(const std::vector<StmtPtr>& body, SymEnv* env) {
  for (const auto& s : body) process_stmt(s, env);
}

}  // namespace

Constraint symbolize(const std::vector<StmtPtr>& slice,
                     const Constraint& constraint) {
  SymEnv env;
  process_body(slice, &env);

  Constraint out = constraint;
  out.expr = simplify(substitute(constraint.expr, env));
  out.path.clear();
  for (const auto& p : constraint.path) {
    out.path.push_back(simplify(substitute(p, env)));
  }
  out.side.clear();
  out.widths.clear();
  out.aux_defs.clear();

  // Keep only the auxiliary definitions the rewritten constraint mentions.
  std::map<std::string, int> widths;
  asl::collect_symbol_widths(out.expr, &widths);
  for (const auto& p : out.path) asl::collect_symbol_widths(p, &widths);
  for (std::size_t i = 0; i < env.side.size(); ++i) {
    std::map<std::string, int> side_syms;
    asl::collect_symbol_widths(env.side[i], &side_syms);
    bool relevant = false;
    for (const auto& [name, width] : side_syms) {
      (void)width;
      if (widths.count(name)) relevant = true;
    }
    if (relevant) {
      out.side.push_back(env.side[i]);
      for (const auto& [name, width] : side_syms) widths[name] = width;
    }
  }
  for (const auto& [name, choices] : env.aux) {
    if (widths.count(name)) out.aux_defs[name] = choices;
  }
  out.widths = std::move(widths);
  return out;
}

Constraint symbolize_in_program(const std::vector<StmtPtr>& statements,
                                const Constraint& constraint) {
  ExprPtr target = constraint.expr;
  for (const auto& p : constraint.path) {
    target = asl::make_expr(asl::Binary{asl::BinaryOp::kAnd, target, p});
  }
  std::vector<StmtPtr> slice = backward_slice(statements, target);
  return symbolize(slice, constraint);
}

bool constraint_holds(const Constraint& constraint,
                      const std::map<std::string, std::uint32_t>& assignment) {
  for (const auto& [name, width] : constraint.widths) {
    auto it = assignment.find(name);
    if (it == assignment.end()) {
      throw EvalError("witness is missing symbol '" + name + "'");
    }
    if (width < 32 && it->second >= (std::uint32_t{1} << width)) {
      return false;
    }
  }
  EvalEnv env;
  env.symbols = &assignment;
  for (const auto& p : constraint.path) {
    if (!eval_expr(p, env).truthy()) return false;
  }
  for (const auto& s : constraint.side) {
    if (!eval_expr(s, env).truthy()) return false;
  }
  bool atom = eval_expr(constraint.expr, env).truthy();
  return constraint.polarity == Polarity::kAssert ? atom : !atom;
}

}  // namespace specdiff
