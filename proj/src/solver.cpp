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

#include "specdiff/solver.h"

#include <algorithm>
#include <cstdlib>
#include <random>

#include "specdiff/errors.h"
#include "specdiff/eval.h"

namespace specdiff {

std::vector<SymbolDomain> domains_for(const Constraint& constraint) {
  std::vector<SymbolDomain> domains;
  for (const auto& [name, width] : constraint.widths) {
    domains.push_back({name, width});
  }
  return domains;
}

namespace {

bool holds_or_false(const Constraint& c,
                    const std::map<std::string, std::uint32_t>& assignment) {
  // A candidate that makes the expression non-evaluable (e.g. divides by
  // zero) cannot witness it.
  try {
    return constraint_holds(c, assignment);
  } catch (const EvalError&) {
    return false;
  }
}

// ---------------------------------------------------------------------------
// Linear normal form: sum(coeff_i * sym_i) op k.

struct LinExpr {
  std::map<std::string, std::int64_t> coeffs;
  std::int64_t constant = 0;
};

std::optional<LinExpr> linearize(const asl::ExprPtr& e) {
  using namespace asl;
  if (const auto* i = expr_as<IntLit>(e)) {
    return LinExpr{{}, i->value};
  }
  if (const auto* b = expr_as<BitLit>(e)) {
    return LinExpr{{}, static_cast<std::int64_t>(b->value())};
  }
  if (const auto* s = expr_as<SymbolRef>(e)) {
    LinExpr out;
    out.coeffs[s->name] = 1;
    return out;
  }
  if (const auto* c = expr_as<Call>(e)) {
    // UInt and ZeroExtend are value-preserving for solving purposes.
    if (c->fn == Builtin::kUInt) return linearize(c->args[0]);
    if (c->fn == Builtin::kZeroExtend) return linearize(c->args[0]);
    return std::nullopt;
  }
  if (const auto* cc = expr_as<Concat>(e)) {
    int rw = static_width(cc->rhs);
    if (rw <= 0 || rw > 62) return std::nullopt;
    auto lhs = linearize(cc->lhs);
    auto rhs = linearize(cc->rhs);
    if (!lhs || !rhs) return std::nullopt;
    LinExpr out = *rhs;
    std::int64_t scale = std::int64_t{1} << rw;
    for (const auto& [name, coeff] : lhs->coeffs) out.coeffs[name] += coeff * scale;
    out.constant += lhs->constant * scale;
    return out;
  }
  const auto* bin = expr_as<Binary>(e);
  if (!bin) return std::nullopt;
  switch (bin->op) {
    case BinaryOp::kAdd:
    case BinaryOp::kSub: {
      auto l = linearize(bin->lhs);
      auto r = linearize(bin->rhs);
      if (!l || !r) return std::nullopt;
      std::int64_t sign = bin->op == BinaryOp::kAdd ? 1 : -1;
      LinExpr out = *l;
      for (const auto& [name, coeff] : r->coeffs) out.coeffs[name] += sign * coeff;
      out.constant += sign * r->constant;
      return out;
    }
    case BinaryOp::kMul: {
      auto l = linearize(bin->lhs);
      auto r = linearize(bin->rhs);
      if (!l || !r) return std::nullopt;
      if (l->coeffs.empty()) std::swap(l, r);
      if (!r->coeffs.empty()) return std::nullopt;  // nonlinear
      LinExpr out;
      for (const auto& [name, coeff] : l->coeffs) {
        out.coeffs[name] = coeff * r->constant;
      }
      out.constant = l->constant * r->constant;
      return out;
    }
    case BinaryOp::kShl: {
      auto l = linearize(bin->lhs);
      auto r = linearize(bin->rhs);
      if (!l || !r || !r->coeffs.empty()) return std::nullopt;
      if (r->constant < 0 || r->constant > 62) return std::nullopt;
      std::int64_t scale = std::int64_t{1} << r->constant;
      LinExpr out = *l;
      for (auto& [name, coeff] : out.coeffs) coeff *= scale;
      out.constant *= scale;
      return out;
    }
    default:
      return std::nullopt;
  }
}

enum class LinOp { kEq, kNe, kLt, kGt, kLe, kGe };

LinOp negate_op(LinOp op) {
  switch (op) {
    case LinOp::kEq: return LinOp::kNe;
    case LinOp::kNe: return LinOp::kEq;
    case LinOp::kLt: return LinOp::kGe;
    case LinOp::kGt: return LinOp::kLe;
    case LinOp::kLe: return LinOp::kGt;
    case LinOp::kGe: return LinOp::kLt;
  }
  return LinOp::kEq;
}

struct LinAtom {
  std::map<std::string, std::int64_t> coeffs;
  std::int64_t rhs = 0;  // sum(coeff * sym) op rhs
  LinOp op = LinOp::kEq;

  bool eval(const std::map<std::string, std::uint32_t>& a) const {
    std::int64_t sum = 0;
    for (const auto& [name, coeff] : coeffs) {
      sum += coeff * static_cast<std::int64_t>(a.at(name));
    }
    switch (op) {
      case LinOp::kEq: return sum == rhs;
      case LinOp::kNe: return sum != rhs;
      case LinOp::kLt: return sum < rhs;
      case LinOp::kGt: return sum > rhs;
      case LinOp::kLe: return sum <= rhs;
      case LinOp::kGe: return sum >= rhs;
    }
    return false;
  }
};

// Flattens a boolean expression into conjoined linear atoms. Fails on
// disjunctions and anything non-linear.
bool flatten_conjunction(const asl::ExprPtr& e, bool negated,
                         std::vector<LinAtom>* out) {
  using namespace asl;
  if (const auto* n = expr_as<Not>(e)) {
    return flatten_conjunction(n->operand, !negated, out);
  }
  const auto* bin = expr_as<Binary>(e);
  if (!bin) return false;
  if (bin->op == BinaryOp::kAnd && !negated) {
    return flatten_conjunction(bin->lhs, false, out) &&
           flatten_conjunction(bin->rhs, false, out);
  }
  if (bin->op == BinaryOp::kOr && negated) {
    // !(a || b) == !a && !b
    return flatten_conjunction(bin->lhs, true, out) &&
           flatten_conjunction(bin->rhs, true, out);
  }
  LinOp op;
  switch (bin->op) {
    case BinaryOp::kEq: op = LinOp::kEq; break;
    case BinaryOp::kNe: op = LinOp::kNe; break;
    case BinaryOp::kLt: op = LinOp::kLt; break;
    case BinaryOp::kGt: op = LinOp::kGt; break;
    case BinaryOp::kLe: op = LinOp::kLe; break;
    case BinaryOp::kGe: op = LinOp::kGe; break;
    default:
      return false;
  }
  auto l = linearize(bin->lhs);
  auto r = linearize(bin->rhs);
  if (!l || !r) return false;
  LinAtom atom;
  atom.op = negated ? negate_op(op) : op;
  atom.coeffs = l->coeffs;
  for (const auto& [name, coeff] : r->coeffs) atom.coeffs[name] -= coeff;
  for (auto it = atom.coeffs.begin(); it != atom.coeffs.end();) {
    it = it->second == 0 ? atom.coeffs.erase(it) : std::next(it);
  }
  atom.rhs = r->constant - l->constant;
  out->push_back(std::move(atom));
  return true;
}

struct Interval {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  bool empty() const { return lo > hi; }
};

// Interval propagation over conjoined linear atoms. Returns false when the
// system is provably unsatisfiable over the boxes.
bool propagate(const std::vector<LinAtom>& atoms,
               std::map<std::string, Interval>* boxes) {
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& atom : atoms) {
      // Bounds of the linear form over the current boxes.
      std::int64_t lo = 0, hi = 0;
      for (const auto& [name, coeff] : atom.coeffs) {
        const Interval& box = boxes->at(name);
        if (coeff >= 0) {
          lo += coeff * box.lo;
          hi += coeff * box.hi;
        } else {
          lo += coeff * box.hi;
          hi += coeff * box.lo;
        }
      }
      switch (atom.op) {
        case LinOp::kEq:
          if (atom.rhs < lo || atom.rhs > hi) return false;
          break;
        case LinOp::kNe:
          if (lo == hi && lo == atom.rhs) return false;
          break;
        case LinOp::kLt:
          if (lo >= atom.rhs) return false;
          break;
        case LinOp::kGt:
          if (hi <= atom.rhs) return false;
          break;
        case LinOp::kLe:
          if (lo > atom.rhs) return false;
          break;
        case LinOp::kGe:
          if (hi < atom.rhs) return false;
          break;
      }
      // Tighten each variable against the rest of the form.
      for (const auto& [name, coeff] : atom.coeffs) {
        Interval& box = boxes->at(name);
        std::int64_t rest_lo = 0, rest_hi = 0;
        for (const auto& [other, oc] : atom.coeffs) {
          if (other == name) continue;
          const Interval& ob = boxes->at(other);
          if (oc >= 0) {
            rest_lo += oc * ob.lo;
            rest_hi += oc * ob.hi;
          } else {
            rest_lo += oc * ob.hi;
            rest_hi += oc * ob.lo;
          }
        }
        // coeff * x must lie within [term_lo, term_hi] for the atom to be
        // satisfiable given the rest.
        std::int64_t term_lo, term_hi;
        switch (atom.op) {
          case LinOp::kEq:
            term_lo = atom.rhs - rest_hi;
            term_hi = atom.rhs - rest_lo;
            break;
          case LinOp::kLt:
            term_lo = coeff >= 0 ? coeff * box.lo : coeff * box.hi;
            term_hi = atom.rhs - 1 - rest_lo;
            break;
          case LinOp::kLe:
            term_lo = coeff >= 0 ? coeff * box.lo : coeff * box.hi;
            term_hi = atom.rhs - rest_lo;
            break;
          case LinOp::kGt:
            term_lo = atom.rhs + 1 - rest_hi;
            term_hi = coeff >= 0 ? coeff * box.hi : coeff * box.lo;
            break;
          case LinOp::kGe:
            term_lo = atom.rhs - rest_hi;
            term_hi = coeff >= 0 ? coeff * box.hi : coeff * box.lo;
            break;
          case LinOp::kNe:
          default:
            continue;  // != prunes nothing interval-wise
        }
        std::int64_t new_lo = box.lo, new_hi = box.hi;
        if (coeff > 0) {
          // x in [ceil(term_lo/coeff), floor(term_hi/coeff)]
          auto floor_div = [](std::int64_t a, std::int64_t b) {
            std::int64_t q = a / b;
            if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
            return q;
          };
          auto ceil_div = [&](std::int64_t a, std::int64_t b) {
            return -floor_div(-a, b);
          };
          new_lo = std::max(new_lo, ceil_div(term_lo, coeff));
          new_hi = std::min(new_hi, floor_div(term_hi, coeff));
        } else if (coeff < 0) {
          auto floor_div = [](std::int64_t a, std::int64_t b) {
            std::int64_t q = a / b;
            if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
            return q;
          };
          auto ceil_div = [&](std::int64_t a, std::int64_t b) {
            return -floor_div(-a, b);
          };
          new_lo = std::max(new_lo, ceil_div(term_hi, coeff));
          new_hi = std::min(new_hi, floor_div(term_lo, coeff));
        }
        if (new_lo != box.lo || new_hi != box.hi) {
          box.lo = new_lo;
          box.hi = new_hi;
          changed = true;
          if (box.empty()) return false;
        }
      }
    }
  }
  return true;
}

Constraint with_polarity(const Constraint& c, Polarity p) {
  Constraint out = c;
  out.polarity = p;
  return out;
}

std::optional<Witness> verify_and_finish(
    const Constraint& c, std::map<std::string, std::uint32_t> assignment) {
  if (!constraint_holds(c, assignment)) {
    throw Error("internal error: solver produced an unverifiable witness");
  }
  Witness w;
  w.assignment = std::move(assignment);
  w.polarity = c.polarity;
  return w;
}

}  // namespace

std::optional<Witness> solve(const Constraint& constraint,
                             const std::vector<SymbolDomain>& domains,
                             std::uint64_t seed) {
  std::vector<SymbolDomain> sorted = domains;
  std::sort(sorted.begin(), sorted.end(),
            [](const SymbolDomain& a, const SymbolDomain& b) {
              return a.symbol < b.symbol;
            });
  int joint_bits = 0;
  for (const auto& d : sorted) {
    if (d.width < 1 || d.width > 24) {
      throw Error("symbol domain '" + d.symbol + "' has invalid width " +
                  std::to_string(d.width) + " (must be 1..24)");
    }
    joint_bits += d.width;
  }
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].symbol == sorted[i - 1].symbol) {
      throw Error("duplicate domain for symbol '" + sorted[i].symbol + "'");
    }
  }
  for (const auto& [name, width] : constraint.widths) {
    (void)width;
    bool found = false;
    for (const auto& d : sorted) found = found || d.symbol == name;
    if (!found) {
      throw Error("no domain provided for symbol '" + name + "'");
    }
  }

  std::map<std::string, std::uint32_t> assignment;
  for (const auto& d : sorted) assignment[d.symbol] = 0;

  if (joint_bits <= kExhaustiveJointBits) {
    // Exhaustive enumeration, lexicographic by symbol name then ascending
    // value: the name-sorted tuple is incremented from its last position.
    while (true) {
      if (holds_or_false(constraint, assignment)) {
        return verify_and_finish(constraint, std::move(assignment));
      }
      int pos = static_cast<int>(sorted.size()) - 1;
      while (pos >= 0) {
        std::uint32_t& v = assignment[sorted[static_cast<std::size_t>(pos)].symbol];
        if (v < sorted[static_cast<std::size_t>(pos)].max_value()) {
          ++v;
          break;
        }
        v = 0;
        --pos;
      }
      if (pos < 0) return std::nullopt;  // proven unsatisfiable
    }
  }

  // Large joint domain. First try to reason over a linear normal form.
  std::vector<LinAtom> atoms;
  bool linear = true;
  {
    std::vector<asl::ExprPtr> conjuncts = constraint.path;
    conjuncts.insert(conjuncts.end(), constraint.side.begin(),
                     constraint.side.end());
    for (const auto& ce : conjuncts) {
      linear = linear && flatten_conjunction(ce, false, &atoms);
    }
    linear = linear && flatten_conjunction(
                           constraint.expr,
                           constraint.polarity == Polarity::kNegate, &atoms);
  }
  if (linear) {
    std::map<std::string, Interval> boxes;
    for (const auto& d : sorted) {
      boxes[d.symbol] = {0, static_cast<std::int64_t>(d.max_value())};
    }
    if (!propagate(atoms, &boxes)) {
      return std::nullopt;  // interval proof of unsatisfiability
    }
    // Greedy candidate from the tightened boxes plus bounded repair.
    for (const auto& [name, box] : boxes) {
      assignment[name] = static_cast<std::uint32_t>(box.lo);
    }
    for (int round = 0; round < 200; ++round) {
      const LinAtom* violated = nullptr;
      for (const auto& atom : atoms) {
        if (!atom.eval(assignment)) {
          violated = &atom;
          break;
        }
      }
      if (!violated) break;
      // Move the largest-coefficient variable toward satisfaction.
      std::string var;
      std::int64_t var_coeff = 0;
      for (const auto& [name, coeff] : violated->coeffs) {
        if (std::abs(coeff) > std::abs(var_coeff)) {
          var = name;
          var_coeff = coeff;
        }
      }
      if (var.empty()) break;  // contradictory constant atom
      std::int64_t sum = 0;
      for (const auto& [name, coeff] : violated->coeffs) {
        sum += coeff * static_cast<std::int64_t>(assignment[name]);
      }
      std::int64_t target = violated->rhs;
      if (violated->op == LinOp::kLt) target = violated->rhs - 1;
      if (violated->op == LinOp::kGt) target = violated->rhs + 1;
      if (violated->op == LinOp::kNe) target = sum + var_coeff;  // nudge by 1
      std::int64_t delta = target - sum;
      std::int64_t step = delta / var_coeff;
      if (step == 0) step = ((delta > 0) == (var_coeff > 0)) ? 1 : -1;
      std::int64_t moved = static_cast<std::int64_t>(assignment[var]) + step;
      const Interval& box = boxes[var];
      moved = std::clamp(moved, box.lo, box.hi);
      assignment[var] = static_cast<std::uint32_t>(moved);
    }
    if (holds_or_false(constraint, assignment)) {
      return verify_and_finish(constraint, std::move(assignment));
    }
  }

  // Randomized fallback with a fixed budget. Domain sizes are powers of
  // two, so masking engine output draws uniformly.
  std::mt19937_64 engine(seed ^ 0x9e3779b97f4a7c15ULL);
  for (std::uint64_t trial = 0; trial < kRandomTrialBudget; ++trial) {
    for (const auto& d : sorted) {
      assignment[d.symbol] =
          static_cast<std::uint32_t>(engine()) & d.max_value();
    }
    if (holds_or_false(constraint, assignment)) {
      return verify_and_finish(constraint, std::move(assignment));
    }
  }
  throw SolverTimeout(kRandomTrialBudget);
}

std::pair<std::optional<Witness>, std::optional<Witness>> solve_both(
    const Constraint& constraint, const std::vector<SymbolDomain>& domains,
    std::uint64_t seed) {
  return {solve(with_polarity(constraint, Polarity::kAssert), domains, seed),
          solve(with_polarity(constraint, Polarity::kNegate), domains, seed)};
}

}  // namespace specdiff
