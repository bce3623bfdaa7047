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

#include "specdiff/eval.h"

#include "specdiff/errors.h"

namespace specdiff {

std::string to_string(DecodeTag tag) {
  switch (tag) {
    case DecodeTag::kOk: return "ok";
    case DecodeTag::kUndefined: return "undefined";
    case DecodeTag::kUnpredictable: return "unpredictable";
  }
  return "?";
}

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t wrap_unsigned(std::int64_t v, int width) {
  if (width <= 0 || width >= 64) return v;
  std::uint64_t mask = (std::uint64_t{1} << width) - 1;
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(v) & mask);
}

Value sign_extend(Value x) {
  if (x.width <= 0) {
    throw EvalError("SInt/SignExtend requires a sized bit-string operand");
  }
  std::int64_t v = x.v;
  if (x.width < 64 && (v & (std::int64_t{1} << (x.width - 1)))) {
    v -= std::int64_t{1} << x.width;
  }
  return {v, 0};
}

}  // namespace

Value eval_expr(const asl::ExprPtr& e, const EvalEnv& env) {
  using namespace asl;
  struct V {
    const EvalEnv& env;

    Value operator()(const SymbolRef& n) {
      if (!env.symbols) throw EvalError("no symbol assignment in scope");
      auto it = env.symbols->find(n.name);
      if (it == env.symbols->end()) {
        throw EvalError("unbound symbol '" + n.name + "'");
      }
      return {static_cast<std::int64_t>(it->second), n.width};
    }
    Value operator()(const VarRef& n) {
      auto it = env.vars.find(n.name);
      if (it == env.vars.end()) {
        throw EvalError("unbound variable '" + n.name + "'");
      }
      return it->second;
    }
    Value operator()(const BitLit& n) {
      return {static_cast<std::int64_t>(n.value()), n.width()};
    }
    Value operator()(const IntLit& n) { return {n.value, 0}; }
    Value operator()(const Concat& n) {
      Value l = eval_expr(n.lhs, env);
      Value r = eval_expr(n.rhs, env);
      if (l.width <= 0 || r.width <= 0) {
        throw EvalError("concatenation of an unsized value");
      }
      if (l.width + r.width > 63) {
        throw EvalError("concatenation wider than 63 bits");
      }
      return {(l.v << r.width) | r.v, l.width + r.width};
    }
    Value operator()(const Call& n) {
      switch (n.fn) {
        case Builtin::kUInt: {
          Value x = eval_expr(n.args[0], env);
          return {x.v, 0};
        }
        case Builtin::kSInt:
          return sign_extend(eval_expr(n.args[0], env));
        case Builtin::kZeroExtend: {
          Value x = eval_expr(n.args[0], env);
          Value w = eval_expr(n.args[1], env);
          if (w.v <= 0 || w.v > 63) {
            throw EvalError("ZeroExtend width out of range");
          }
          if (x.width > 0 && x.width > w.v) {
            throw EvalError("ZeroExtend cannot narrow a value");
          }
          return {x.v, static_cast<int>(w.v)};
        }
        case Builtin::kSignExtend: {
          Value x = eval_expr(n.args[0], env);
          Value w = eval_expr(n.args[1], env);
          if (w.v <= 0 || w.v > 63) {
            throw EvalError("SignExtend width out of range");
          }
          if (x.width > 0 && x.width > w.v) {
            throw EvalError("SignExtend cannot narrow a value");
          }
          std::int64_t s = sign_extend(x).v;
          return {wrap_unsigned(s, static_cast<int>(w.v)),
                  static_cast<int>(w.v)};
        }
      }
      throw EvalError("unknown builtin");
    }
    Value operator()(const Binary& n) {
      // Boolean connectives short-circuit.
      if (n.op == BinaryOp::kAnd) {
        if (!eval_expr(n.lhs, env).truthy()) return {0, 0};
        return {eval_expr(n.rhs, env).truthy() ? 1 : 0, 0};
      }
      if (n.op == BinaryOp::kOr) {
        if (eval_expr(n.lhs, env).truthy()) return {1, 0};
        return {eval_expr(n.rhs, env).truthy() ? 1 : 0, 0};
      }
      Value l = eval_expr(n.lhs, env);
      Value r = eval_expr(n.rhs, env);
      switch (n.op) {
        case BinaryOp::kAdd: return {l.v + r.v, 0};
        case BinaryOp::kSub: return {l.v - r.v, 0};
        case BinaryOp::kMul: return {l.v * r.v, 0};
        case BinaryOp::kDiv:
          if (r.v == 0) throw EvalError("division by zero");
          return {floor_div(l.v, r.v), 0};
        case BinaryOp::kShl:
          if (r.v < 0 || r.v > 62) throw EvalError("shift amount out of range");
          return {l.v << r.v, 0};
        case BinaryOp::kEq: return {l.v == r.v ? 1 : 0, 0};
        case BinaryOp::kNe: return {l.v != r.v ? 1 : 0, 0};
        case BinaryOp::kLt: return {l.v < r.v ? 1 : 0, 0};
        case BinaryOp::kGt: return {l.v > r.v ? 1 : 0, 0};
        case BinaryOp::kLe: return {l.v <= r.v ? 1 : 0, 0};
        case BinaryOp::kGe: return {l.v >= r.v ? 1 : 0, 0};
        case BinaryOp::kAnd:
        case BinaryOp::kOr: break;
      }
      throw EvalError("unknown binary operator");
    }
    Value operator()(const Not& n) {
      return {eval_expr(n.operand, env).truthy() ? 0 : 1, 0};
    }
    Value operator()(const IfExpr& n) {
      return eval_expr(n.cond, env).truthy() ? eval_expr(n.then_value, env)
                                             : eval_expr(n.else_value, env);
    }
    Value operator()(const Element& n) {
      throw EvalError("register/memory read '" + n.collection +
                      "[...]' is not concretely evaluable");
    }
  };
  return std::visit(V{env}, e->node);
}

namespace {

// Walks a statement list; returns true when evaluation should stop because
// an UNDEFINED/UNPREDICTABLE statement was reached (result->tag is set).
bool run_body(const std::vector<asl::StmtPtr>& body, EvalEnv* env,
              DecodeResult* result) {
  using namespace asl;
  for (const auto& s : body) {
    if (const auto* a = stmt_as<Assign>(s)) {
      env->vars[a->name] = eval_expr(a->value, *env);
      continue;
    }
    if (const auto* i = stmt_as<If>(s)) {
      bool taken = eval_expr(i->cond, *env).truthy();
      if (run_body(taken ? i->then_body : i->else_body, env, result)) {
        return true;
      }
      continue;
    }
    if (const auto* c = stmt_as<Case>(s)) {
      Value scrutinee = eval_expr(c->scrutinee, *env);
      const CaseArm* hit = nullptr;
      for (const auto& arm : c->arms) {
        BitLit pattern{arm.pattern};
        if (static_cast<std::int64_t>(pattern.value()) == scrutinee.v) {
          hit = &arm;
          break;
        }
      }
      if (!hit) {
        // No arm describes this variant: the instruction space outside the
        // enumerated patterns is undefined.
        result->tag = DecodeTag::kUndefined;
        return true;
      }
      if (run_body(hit->body, env, result)) return true;
      continue;
    }
    if (stmt_as<UndefinedStmt>(s)) {
      result->tag = DecodeTag::kUndefined;
      return true;
    }
    if (stmt_as<UnpredictableStmt>(s)) {
      result->tag = DecodeTag::kUnpredictable;
      return true;
    }
    if (const auto* st = stmt_as<Store>(s)) {
      throw EvalError("store to '" + st->collection +
                      "[...]' is not concretely evaluable");
    }
  }
  return false;
}

}  // namespace

DecodeResult eval_decode(const asl::Program& program,
                         const std::map<std::string, std::uint32_t>& symbols) {
  DecodeResult result;
  EvalEnv env;
  env.symbols = &symbols;
  run_body(program.statements, &env, &result);
  result.bindings = std::move(env.vars);
  return result;
}

}  // namespace specdiff
