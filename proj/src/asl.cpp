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

#include <cassert>
#include <cstdlib>
#include <functional>

#include "specdiff/errors.h"

namespace specdiff::asl {
namespace {

enum class Tok {
  kIdent,
  kInt,
  kBitLit,
  kIf,
  kThen,
  kElse,
  kCase,
  kOf,
  kWhen,
  kUndefined,
  kUnpredictable,
  kDiv,
  kEqEq,
  kNe,
  kLe,
  kGe,
  kLt,
  kGt,
  kAndAnd,
  kOrOr,
  kPlus,
  kMinus,
  kStar,
  kShl,
  kColon,
  kLParen,
  kRParen,
  kLBracket,
  kRBracket,
  kComma,
  kAssign,
  kSemi,
  kBang,
  kEnd,
};

struct Token {
  Tok kind;
  std::string text;
  std::int64_t int_value = 0;
  int line = 1;
  int col = 1;
};

bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool is_ident_char(char c) {
  return is_ident_start(c) || (c >= '0' && c <= '9');
}
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::vector<Token> tokenize(const std::string& text, int first_line) {
  std::vector<Token> out;
  int line = first_line;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (i < text.size() && text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  auto push = [&](Tok kind, std::string t, int l, int c) {
    out.push_back(Token{kind, std::move(t), 0, l, c});
  };

  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    int tl = line, tc = col;
    if (c == '\'') {
      std::size_t j = i + 1;
      std::string bits;
      while (j < text.size() && text[j] != '\'') {
        if (text[j] != '0' && text[j] != '1') {
          throw SyntaxError("bit-string literal may contain only 0 and 1", tl,
                            tc);
        }
        bits.push_back(text[j]);
        ++j;
      }
      if (j >= text.size()) {
        throw SyntaxError("unterminated bit-string literal", tl, tc);
      }
      if (bits.empty()) {
        throw SyntaxError("empty bit-string literal", tl, tc);
      }
      advance(j + 1 - i);
      push(Tok::kBitLit, bits, tl, tc);
      continue;
    }
    if (is_digit(c)) {
      std::size_t j = i;
      std::int64_t value = 0;
      if (c == '0' && i + 1 < text.size() &&
          (text[i + 1] == 'x' || text[i + 1] == 'X')) {
        j = i + 2;
        std::size_t start = j;
        while (j < text.size() && (is_digit(text[j]) ||
                                   (text[j] >= 'a' && text[j] <= 'f') ||
                                   (text[j] >= 'A' && text[j] <= 'F'))) {
          char d = text[j];
          int nibble = is_digit(d) ? d - '0'
                                   : (d >= 'a' ? d - 'a' + 10 : d - 'A' + 10);
          value = value * 16 + nibble;
          ++j;
        }
        if (j == start) throw SyntaxError("malformed hex literal", tl, tc);
      } else {
        while (j < text.size() && is_digit(text[j])) {
          value = value * 10 + (text[j] - '0');
          ++j;
        }
      }
      std::string t = text.substr(i, j - i);
      advance(j - i);
      out.push_back(Token{Tok::kInt, t, value, tl, tc});
      continue;
    }
    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && is_ident_char(text[j])) ++j;
      std::string word = text.substr(i, j - i);
      advance(j - i);
      Tok kind = Tok::kIdent;
      if (word == "if") kind = Tok::kIf;
      else if (word == "then") kind = Tok::kThen;
      else if (word == "else") kind = Tok::kElse;
      else if (word == "case") kind = Tok::kCase;
      else if (word == "of") kind = Tok::kOf;
      else if (word == "when") kind = Tok::kWhen;
      else if (word == "UNDEFINED") kind = Tok::kUndefined;
      else if (word == "UNPREDICTABLE") kind = Tok::kUnpredictable;
      else if (word == "DIV") kind = Tok::kDiv;
      push(kind, word, tl, tc);
      continue;
    }
    auto two = [&](char a, char b) {
      return c == a && i + 1 < text.size() && text[i + 1] == b;
    };
    if (two('=', '=')) { advance(2); push(Tok::kEqEq, "==", tl, tc); continue; }
    if (two('!', '=')) { advance(2); push(Tok::kNe, "!=", tl, tc); continue; }
    if (two('<', '=')) { advance(2); push(Tok::kLe, "<=", tl, tc); continue; }
    if (two('>', '=')) { advance(2); push(Tok::kGe, ">=", tl, tc); continue; }
    if (two('<', '<')) { advance(2); push(Tok::kShl, "<<", tl, tc); continue; }
    if (two('&', '&')) { advance(2); push(Tok::kAndAnd, "&&", tl, tc); continue; }
    if (two('|', '|')) { advance(2); push(Tok::kOrOr, "||", tl, tc); continue; }
    switch (c) {
      case '<': advance(1); push(Tok::kLt, "<", tl, tc); continue;
      case '>': advance(1); push(Tok::kGt, ">", tl, tc); continue;
      case '+': advance(1); push(Tok::kPlus, "+", tl, tc); continue;
      case '-': advance(1); push(Tok::kMinus, "-", tl, tc); continue;
      case '*': advance(1); push(Tok::kStar, "*", tl, tc); continue;
      case ':': advance(1); push(Tok::kColon, ":", tl, tc); continue;
      case '(': advance(1); push(Tok::kLParen, "(", tl, tc); continue;
      case ')': advance(1); push(Tok::kRParen, ")", tl, tc); continue;
      case '[': advance(1); push(Tok::kLBracket, "[", tl, tc); continue;
      case ']': advance(1); push(Tok::kRBracket, "]", tl, tc); continue;
      case ',': advance(1); push(Tok::kComma, ",", tl, tc); continue;
      case '=': advance(1); push(Tok::kAssign, "=", tl, tc); continue;
      case ';': advance(1); push(Tok::kSemi, ";", tl, tc); continue;
      case '!': advance(1); push(Tok::kBang, "!", tl, tc); continue;
      default:
        throw SyntaxError(std::string("unexpected character '") + c + "'", tl,
                          tc);
    }
  }
  out.push_back(Token{Tok::kEnd, "", 0, line, col});
  return out;
}

constexpr int kMaxIfExprDepth = 2;  // an if-expression plus one nested level

class Parser {
 public:
  Parser(std::vector<Token> tokens, const ParseContext& ctx)
      : tokens_(std::move(tokens)), ctx_(ctx) {
    bound_ = ctx.prebound_vars;
  }

  Program parse_program() {
    Program p;
    while (peek().kind != Tok::kEnd) {
      p.statements.push_back(parse_statement());
    }
    return p;
  }

  ExprPtr parse_single_expression() {
    ExprPtr e = parse_expr(0);
    expect(Tok::kEnd, "end of expression");
    return e;
  }

 private:
  const Token& peek(int ahead = 0) const {
    std::size_t idx = pos_ + static_cast<std::size_t>(ahead);
    if (idx >= tokens_.size()) idx = tokens_.size() - 1;
    return tokens_[idx];
  }
  const Token& take() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
  bool accept(Tok kind) {
    if (peek().kind == kind) {
      take();
      return true;
    }
    return false;
  }
  const Token& expect(Tok kind, const char* what) {
    if (peek().kind != kind) {
      throw SyntaxError(std::string("expected ") + what + ", found '" +
                            (peek().kind == Tok::kEnd ? "<end>" : peek().text) +
                            "'",
                        peek().line, peek().col);
    }
    return take();
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError(msg, peek().line, peek().col);
  }

  bool is_builtin(const std::string& name, Builtin* out) const {
    if (name == "UInt") { *out = Builtin::kUInt; return true; }
    if (name == "SInt") { *out = Builtin::kSInt; return true; }
    if (name == "ZeroExtend") { *out = Builtin::kZeroExtend; return true; }
    if (name == "SignExtend") { *out = Builtin::kSignExtend; return true; }
    return false;
  }

  StmtPtr parse_statement() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::kIf: {
        take();
        ExprPtr cond = parse_expr(0);
        expect(Tok::kThen, "'then'");
        If node;
        node.cond = cond;
        node.then_body.push_back(parse_statement());
        if (accept(Tok::kElse)) {
          node.else_body.push_back(parse_statement());
        }
        return make_stmt(std::move(node));
      }
      case Tok::kCase: {
        take();
        Case node;
        node.scrutinee = parse_expr(0);
        int scrutinee_width = static_width(node.scrutinee);
        expect(Tok::kOf, "'of'");
        while (peek().kind == Tok::kWhen) {
          take();
          const Token& pat = expect(Tok::kBitLit, "bit-string pattern");
          if (scrutinee_width > 0 &&
              static_cast<int>(pat.text.size()) != scrutinee_width) {
            throw SyntaxError("case pattern '" + pat.text + "' is " +
                                  std::to_string(pat.text.size()) +
                                  " bits but the scrutinee is " +
                                  std::to_string(scrutinee_width) + " bits",
                              pat.line, pat.col);
          }
          CaseArm arm;
          arm.pattern = pat.text;
          arm.body.push_back(parse_statement());
          node.arms.push_back(std::move(arm));
        }
        if (node.arms.empty()) fail("case statement requires at least one arm");
        return make_stmt(std::move(node));
      }
      case Tok::kUndefined:
        take();
        expect(Tok::kSemi, "';'");
        return make_stmt(UndefinedStmt{});
      case Tok::kUnpredictable:
        take();
        expect(Tok::kSemi, "';'");
        return make_stmt(UnpredictableStmt{});
      case Tok::kIdent: {
        Token name = take();
        if (peek().kind == Tok::kLBracket) {
          // Collection store: Coll[args] = value;
          if (!ctx_.collections.count(name.text)) {
            throw SyntaxError("unknown collection '" + name.text + "'",
                              name.line, name.col);
          }
          if (!ctx_.allow_state_access) {
            throw SyntaxError(
                "register/memory access is not allowed in decode programs",
                name.line, name.col);
          }
          take();
          Store node;
          node.collection = name.text;
          node.args.push_back(parse_expr(0));
          while (accept(Tok::kComma)) node.args.push_back(parse_expr(0));
          expect(Tok::kRBracket, "']'");
          expect(Tok::kAssign, "'='");
          node.value = parse_expr(0);
          expect(Tok::kSemi, "';'");
          return make_stmt(std::move(node));
        }
        if (ctx_.symbols.count(name.text)) {
          throw SyntaxError(
              "cannot assign to encoding symbol '" + name.text + "'",
              name.line, name.col);
        }
        Builtin b;
        if (is_builtin(name.text, &b)) {
          throw SyntaxError("cannot assign to builtin '" + name.text + "'",
                            name.line, name.col);
        }
        expect(Tok::kAssign, "'='");
        Assign node;
        node.name = name.text;
        node.value = parse_expr(0);
        expect(Tok::kSemi, "';'");
        bound_.insert(node.name);
        return make_stmt(std::move(node));
      }
      default:
        fail("expected statement");
    }
  }

  ExprPtr parse_expr(int if_depth) {
    if (peek().kind == Tok::kIf) {
      const Token& t = peek();
      if (if_depth + 1 > kMaxIfExprDepth) {
        throw SyntaxError(
            "conditional expression nested deeper than one level", t.line,
            t.col);
      }
      take();
      IfExpr node;
      node.cond = parse_expr(if_depth + 1);
      expect(Tok::kThen, "'then'");
      node.then_value = parse_expr(if_depth + 1);
      expect(Tok::kElse, "'else'");
      node.else_value = parse_expr(if_depth + 1);
      return make_expr(std::move(node));
    }
    return parse_or(if_depth);
  }

  ExprPtr parse_or(int d) {
    ExprPtr lhs = parse_and(d);
    while (peek().kind == Tok::kOrOr) {
      take();
      lhs = make_expr(Binary{BinaryOp::kOr, lhs, parse_and(d)});
    }
    return lhs;
  }

  ExprPtr parse_and(int d) {
    ExprPtr lhs = parse_cmp(d);
    while (peek().kind == Tok::kAndAnd) {
      take();
      lhs = make_expr(Binary{BinaryOp::kAnd, lhs, parse_cmp(d)});
    }
    return lhs;
  }

  static bool cmp_op(Tok k, BinaryOp* op) {
    switch (k) {
      case Tok::kEqEq: *op = BinaryOp::kEq; return true;
      case Tok::kNe: *op = BinaryOp::kNe; return true;
      case Tok::kLt: *op = BinaryOp::kLt; return true;
      case Tok::kGt: *op = BinaryOp::kGt; return true;
      case Tok::kLe: *op = BinaryOp::kLe; return true;
      case Tok::kGe: *op = BinaryOp::kGe; return true;
      default: return false;
    }
  }

  ExprPtr parse_cmp(int d) {
    ExprPtr lhs = parse_shift(d);
    BinaryOp op;
    if (cmp_op(peek().kind, &op)) {
      const Token& t = take();
      ExprPtr rhs = parse_shift(d);
      int lw = static_width(lhs);
      int rw = static_width(rhs);
      if (lw > 0 && rw > 0 && lw != rw) {
        throw SyntaxError("comparison operands have different widths (" +
                              std::to_string(lw) + " vs " +
                              std::to_string(rw) + " bits)",
                          t.line, t.col);
      }
      BinaryOp next;
      if (cmp_op(peek().kind, &next)) {
        fail("comparison operators do not chain");
      }
      return make_expr(Binary{op, lhs, rhs});
    }
    return lhs;
  }

  ExprPtr parse_shift(int d) {
    ExprPtr lhs = parse_add(d);
    while (peek().kind == Tok::kShl) {
      take();
      lhs = make_expr(Binary{BinaryOp::kShl, lhs, parse_add(d)});
    }
    return lhs;
  }

  ExprPtr parse_add(int d) {
    ExprPtr lhs = parse_mul(d);
    while (peek().kind == Tok::kPlus || peek().kind == Tok::kMinus) {
      BinaryOp op =
          take().kind == Tok::kPlus ? BinaryOp::kAdd : BinaryOp::kSub;
      lhs = make_expr(Binary{op, lhs, parse_mul(d)});
    }
    return lhs;
  }

  ExprPtr parse_mul(int d) {
    ExprPtr lhs = parse_concat(d);
    while (peek().kind == Tok::kStar || peek().kind == Tok::kDiv) {
      BinaryOp op = take().kind == Tok::kStar ? BinaryOp::kMul : BinaryOp::kDiv;
      lhs = make_expr(Binary{op, lhs, parse_concat(d)});
    }
    return lhs;
  }

  ExprPtr parse_concat(int d) {
    ExprPtr lhs = parse_unary(d);
    while (peek().kind == Tok::kColon) {
      take();
      lhs = make_expr(Concat{lhs, parse_unary(d)});
    }
    return lhs;
  }

  ExprPtr parse_unary(int d) {
    if (accept(Tok::kBang)) {
      return make_expr(Not{parse_unary(d)});
    }
    return parse_primary(d);
  }

  ExprPtr parse_primary(int d) {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::kInt: {
        Token tok = take();
        return make_expr(IntLit{tok.int_value});
      }
      case Tok::kBitLit: {
        Token tok = take();
        return make_expr(BitLit{tok.text});
      }
      case Tok::kLParen: {
        take();
        ExprPtr e = parse_expr(d);
        expect(Tok::kRParen, "')'");
        return e;
      }
      case Tok::kIdent: {
        Token name = take();
        if (peek().kind == Tok::kLParen) {
          Builtin fn;
          if (!is_builtin(name.text, &fn)) {
            throw SyntaxError("unknown function '" + name.text + "'",
                              name.line, name.col);
          }
          take();
          Call node;
          node.fn = fn;
          if (peek().kind != Tok::kRParen) {
            node.args.push_back(parse_expr(d));
            while (accept(Tok::kComma)) node.args.push_back(parse_expr(d));
          }
          expect(Tok::kRParen, "')'");
          std::size_t want =
              (fn == Builtin::kUInt || fn == Builtin::kSInt) ? 1u : 2u;
          if (node.args.size() != want) {
            throw SyntaxError(name.text + " expects " + std::to_string(want) +
                                  " argument" + (want == 1 ? "" : "s") +
                                  ", got " + std::to_string(node.args.size()),
                              name.line, name.col);
          }
          return make_expr(std::move(node));
        }
        if (peek().kind == Tok::kLBracket) {
          if (!ctx_.collections.count(name.text)) {
            throw SyntaxError("unknown collection '" + name.text + "'",
                              name.line, name.col);
          }
          if (!ctx_.allow_state_access) {
            throw SyntaxError(
                "register/memory access is not allowed in decode programs",
                name.line, name.col);
          }
          take();
          Element node;
          node.collection = name.text;
          node.args.push_back(parse_expr(d));
          while (accept(Tok::kComma)) node.args.push_back(parse_expr(d));
          expect(Tok::kRBracket, "']'");
          return make_expr(std::move(node));
        }
        auto sym = ctx_.symbols.find(name.text);
        if (sym != ctx_.symbols.end()) {
          return make_expr(SymbolRef{name.text, sym->second});
        }
        if (bound_.count(name.text)) {
          return make_expr(VarRef{name.text});
        }
        throw UnknownIdentifier(name.text, name.line, name.col);
      }
      default:
        fail("expected expression");
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const ParseContext& ctx_;
  std::set<std::string> bound_;
};

// ---------------------------------------------------------------------------
// Printing

int op_prec(BinaryOp op) {
  switch (op) {
    case BinaryOp::kOr: return 1;
    case BinaryOp::kAnd: return 2;
    case BinaryOp::kEq:
    case BinaryOp::kNe:
    case BinaryOp::kLt:
    case BinaryOp::kGt:
    case BinaryOp::kLe:
    case BinaryOp::kGe: return 3;
    case BinaryOp::kShl: return 4;
    case BinaryOp::kAdd:
    case BinaryOp::kSub: return 5;
    case BinaryOp::kMul:
    case BinaryOp::kDiv: return 6;
  }
  return 0;
}

const char* op_text(BinaryOp op) {
  switch (op) {
    case BinaryOp::kAdd: return "+";
    case BinaryOp::kSub: return "-";
    case BinaryOp::kMul: return "*";
    case BinaryOp::kDiv: return "DIV";
    case BinaryOp::kShl: return "<<";
    case BinaryOp::kEq: return "==";
    case BinaryOp::kNe: return "!=";
    case BinaryOp::kLt: return "<";
    case BinaryOp::kGt: return ">";
    case BinaryOp::kLe: return "<=";
    case BinaryOp::kGe: return ">=";
    case BinaryOp::kAnd: return "&&";
    case BinaryOp::kOr: return "||";
  }
  return "?";
}

constexpr int kConcatPrec = 7;
constexpr int kNotPrec = 8;

void print_expr(const ExprPtr& e, int parent_prec, std::string* out);

void print_args(const std::vector<ExprPtr>& args, std::string* out) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out->append(", ");
    print_expr(args[i], 0, out);
  }
}

void print_expr(const ExprPtr& e, int parent_prec, std::string* out) {
  struct V {
    int parent_prec;
    std::string* out;
    void wrap(int prec, const std::function<void()>& body) {
      bool parens = prec < parent_prec;
      if (parens) out->push_back('(');
      body();
      if (parens) out->push_back(')');
    }
    void operator()(const SymbolRef& n) { out->append(n.name); }
    void operator()(const VarRef& n) { out->append(n.name); }
    void operator()(const BitLit& n) {
      out->push_back('\'');
      out->append(n.bits);
      out->push_back('\'');
    }
    void operator()(const IntLit& n) { out->append(std::to_string(n.value)); }
    void operator()(const Concat& n) {
      wrap(kConcatPrec, [&] {
        print_expr(n.lhs, kConcatPrec, out);
        out->push_back(':');
        print_expr(n.rhs, kConcatPrec + 1, out);
      });
    }
    void operator()(const Call& n) {
      switch (n.fn) {
        case Builtin::kUInt: out->append("UInt"); break;
        case Builtin::kSInt: out->append("SInt"); break;
        case Builtin::kZeroExtend: out->append("ZeroExtend"); break;
        case Builtin::kSignExtend: out->append("SignExtend"); break;
      }
      out->push_back('(');
      print_args(n.args, out);
      out->push_back(')');
    }
    void operator()(const Binary& n) {
      int p = op_prec(n.op);
      wrap(p, [&] {
        print_expr(n.lhs, p, out);
        out->push_back(' ');
        out->append(op_text(n.op));
        out->push_back(' ');
        print_expr(n.rhs, p + 1, out);
      });
    }
    void operator()(const Not& n) {
      wrap(kNotPrec, [&] {
        out->push_back('!');
        print_expr(n.operand, kNotPrec, out);
      });
    }
    void operator()(const IfExpr& n) {
      wrap(1, [&] {
        out->append("if ");
        print_expr(n.cond, 0, out);
        out->append(" then ");
        print_expr(n.then_value, 0, out);
        out->append(" else ");
        print_expr(n.else_value, 0, out);
      });
    }
    void operator()(const Element& n) {
      out->append(n.collection);
      out->push_back('[');
      print_args(n.args, out);
      out->push_back(']');
    }
  };
  std::visit(V{parent_prec, out}, e->node);
}

void print_stmt(const StmtPtr& s, std::string* out);

void print_body(const std::vector<StmtPtr>& body, std::string* out) {
  if (body.size() == 1) {
    print_stmt(body[0], out);
    return;
  }
  out->append("{ ");
  for (const auto& s : body) {
    print_stmt(s, out);
    out->push_back(' ');
  }
  out->append("}");
}

void print_stmt(const StmtPtr& s, std::string* out) {
  struct V {
    std::string* out;
    void operator()(const Assign& n) {
      out->append(n.name);
      out->append(" = ");
      print_expr(n.value, 0, out);
      out->push_back(';');
    }
    void operator()(const If& n) {
      out->append("if ");
      print_expr(n.cond, 0, out);
      out->append(" then ");
      print_body(n.then_body, out);
      if (!n.else_body.empty()) {
        out->append(" else ");
        print_body(n.else_body, out);
      }
    }
    void operator()(const Case& n) {
      out->append("case ");
      print_expr(n.scrutinee, 0, out);
      out->append(" of");
      for (const auto& arm : n.arms) {
        out->append(" when '");
        out->append(arm.pattern);
        out->append("' ");
        print_body(arm.body, out);
      }
    }
    void operator()(const UndefinedStmt&) { out->append("UNDEFINED;"); }
    void operator()(const UnpredictableStmt&) { out->append("UNPREDICTABLE;"); }
    void operator()(const Store& n) {
      out->append(n.collection);
      out->push_back('[');
      print_args(n.args, out);
      out->append("] = ");
      print_expr(n.value, 0, out);
      out->push_back(';');
    }
  };
  std::visit(V{out}, s->node);
}

}  // namespace

Program parse_program(const std::string& text, const ParseContext& ctx) {
  Parser p(tokenize(text, ctx.first_line), ctx);
  return p.parse_program();
}

ExprPtr parse_expression(const std::string& text, const ParseContext& ctx) {
  Parser p(tokenize(text, ctx.first_line), ctx);
  return p.parse_single_expression();
}

std::string to_string(const ExprPtr& e) {
  std::string out;
  print_expr(e, 0, &out);
  return out;
}

std::string to_string(const StmtPtr& s) {
  std::string out;
  print_stmt(s, &out);
  return out;
}

std::string to_string(const Program& p) {
  std::string out;
  for (const auto& s : p.statements) {
    if (!out.empty()) out.push_back('\n');
    print_stmt(s, &out);
  }
  return out;
}

namespace {

bool equal_bodies(const std::vector<StmtPtr>& a, const std::vector<StmtPtr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!equal(a[i], b[i])) return false;
  }
  return true;
}

bool equal_args(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!equal(a[i], b[i])) return false;
  }
  return true;
}

}  // namespace

bool equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node.index() != b->node.index()) return false;
  struct V {
    const ExprPtr& b;
    bool operator()(const SymbolRef& n) {
      const auto* o = std::get_if<SymbolRef>(&b->node);
      return n.name == o->name && n.width == o->width;
    }
    bool operator()(const VarRef& n) {
      return n.name == std::get_if<VarRef>(&b->node)->name;
    }
    bool operator()(const BitLit& n) {
      return n.bits == std::get_if<BitLit>(&b->node)->bits;
    }
    bool operator()(const IntLit& n) {
      return n.value == std::get_if<IntLit>(&b->node)->value;
    }
    bool operator()(const Concat& n) {
      const auto* o = std::get_if<Concat>(&b->node);
      return equal(n.lhs, o->lhs) && equal(n.rhs, o->rhs);
    }
    bool operator()(const Call& n) {
      const auto* o = std::get_if<Call>(&b->node);
      return n.fn == o->fn && equal_args(n.args, o->args);
    }
    bool operator()(const Binary& n) {
      const auto* o = std::get_if<Binary>(&b->node);
      return n.op == o->op && equal(n.lhs, o->lhs) && equal(n.rhs, o->rhs);
    }
    bool operator()(const Not& n) {
      return equal(n.operand, std::get_if<Not>(&b->node)->operand);
    }
    bool operator()(const IfExpr& n) {
      const auto* o = std::get_if<IfExpr>(&b->node);
      return equal(n.cond, o->cond) && equal(n.then_value, o->then_value) &&
             equal(n.else_value, o->else_value);
    }
    bool operator()(const Element& n) {
      const auto* o = std::get_if<Element>(&b->node);
      return n.collection == o->collection && equal_args(n.args, o->args);
    }
  };
  return std::visit(V{b}, a->node);
}

bool equal(const StmtPtr& a, const StmtPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node.index() != b->node.index()) return false;
  struct V {
    const StmtPtr& b;
    bool operator()(const Assign& n) {
      const auto* o = std::get_if<Assign>(&b->node);
      return n.name == o->name && equal(n.value, o->value);
    }
    bool operator()(const If& n) {
      const auto* o = std::get_if<If>(&b->node);
      return equal(n.cond, o->cond) && equal_bodies(n.then_body, o->then_body) &&
             equal_bodies(n.else_body, o->else_body);
    }
    bool operator()(const Case& n) {
      const auto* o = std::get_if<Case>(&b->node);
      if (!equal(n.scrutinee, o->scrutinee) || n.arms.size() != o->arms.size())
        return false;
      for (std::size_t i = 0; i < n.arms.size(); ++i) {
        if (n.arms[i].pattern != o->arms[i].pattern ||
            !equal_bodies(n.arms[i].body, o->arms[i].body))
          return false;
      }
      return true;
    }
    bool operator()(const UndefinedStmt&) { return true; }
    bool operator()(const UnpredictableStmt&) { return true; }
    bool operator()(const Store& n) {
      const auto* o = std::get_if<Store>(&b->node);
      return n.collection == o->collection && equal_args(n.args, o->args) &&
             equal(n.value, o->value);
    }
  };
  return std::visit(V{b}, a->node);
}

namespace {

template <typename Fn>
void visit_subexprs(const ExprPtr& e, const Fn& fn) {
  fn(e);
  struct V {
    const Fn& fn;
    void operator()(const SymbolRef&) {}
    void operator()(const VarRef&) {}
    void operator()(const BitLit&) {}
    void operator()(const IntLit&) {}
    void operator()(const Concat& n) {
      visit_subexprs(n.lhs, fn);
      visit_subexprs(n.rhs, fn);
    }
    void operator()(const Call& n) {
      for (const auto& a : n.args) visit_subexprs(a, fn);
    }
    void operator()(const Binary& n) {
      visit_subexprs(n.lhs, fn);
      visit_subexprs(n.rhs, fn);
    }
    void operator()(const Not& n) { visit_subexprs(n.operand, fn); }
    void operator()(const IfExpr& n) {
      visit_subexprs(n.cond, fn);
      visit_subexprs(n.then_value, fn);
      visit_subexprs(n.else_value, fn);
    }
    void operator()(const Element& n) {
      for (const auto& a : n.args) visit_subexprs(a, fn);
    }
  };
  std::visit(V{fn}, e->node);
}

}  // namespace

std::set<std::string> free_vars(const ExprPtr& e) {
  std::set<std::string> out;
  visit_subexprs(e, [&](const ExprPtr& sub) {
    if (const auto* v = expr_as<VarRef>(sub)) out.insert(v->name);
  });
  return out;
}

std::set<std::string> free_symbols(const ExprPtr& e) {
  std::set<std::string> out;
  visit_subexprs(e, [&](const ExprPtr& sub) {
    if (const auto* s = expr_as<SymbolRef>(sub)) out.insert(s->name);
  });
  return out;
}

void collect_symbol_widths(const ExprPtr& e, std::map<std::string, int>* out) {
  visit_subexprs(e, [&](const ExprPtr& sub) {
    if (const auto* s = expr_as<SymbolRef>(sub)) (*out)[s->name] = s->width;
  });
}

std::set<std::string> may_assign(const std::vector<StmtPtr>& body) {
  std::set<std::string> out;
  for (const auto& s : body) {
    if (const auto* a = stmt_as<Assign>(s)) {
      out.insert(a->name);
    } else if (const auto* i = stmt_as<If>(s)) {
      auto t = may_assign(i->then_body);
      auto e = may_assign(i->else_body);
      out.insert(t.begin(), t.end());
      out.insert(e.begin(), e.end());
    } else if (const auto* c = stmt_as<Case>(s)) {
      for (const auto& arm : c->arms) {
        auto a2 = may_assign(arm.body);
        out.insert(a2.begin(), a2.end());
      }
    }
  }
  return out;
}

int static_width(const ExprPtr& e) {
  struct V {
    int operator()(const SymbolRef& n) { return n.width; }
    int operator()(const VarRef&) { return 0; }
    int operator()(const BitLit& n) { return n.width(); }
    int operator()(const IntLit&) { return 0; }
    int operator()(const Concat& n) {
      int l = static_width(n.lhs);
      int r = static_width(n.rhs);
      return (l > 0 && r > 0) ? l + r : 0;
    }
    int operator()(const Call& n) {
      if ((n.fn == Builtin::kZeroExtend || n.fn == Builtin::kSignExtend) &&
          n.args.size() == 2) {
        if (const auto* w = expr_as<IntLit>(n.args[1])) {
          return static_cast<int>(w->value);
        }
      }
      return 0;
    }
    int operator()(const Binary&) { return 0; }
    int operator()(const Not&) { return 0; }
    int operator()(const IfExpr& n) {
      int t = static_width(n.then_value);
      int e = static_width(n.else_value);
      return (t > 0 && t == e) ? t : 0;
    }
    int operator()(const Element&) { return 0; }
  };
  return std::visit(V{}, e->node);
}

}  // namespace specdiff::asl
