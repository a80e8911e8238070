/**
 * Copyright 2026, The diffscope Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may not
 * use this file except in compliance with the License. You may obtain a copy of
 * the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
 * WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
 * License for the specific language governing permissions and limitations under
 * the License.
 */

#include "diffscope/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <utility>

namespace diffscope {

enum class Expression::OpCode : unsigned char {
  Const, Var, Add, Sub, Mul, Div, Pow, Neg, Exp, Log, Abs, Sign,
};

struct Expression::Node {
  OpCode op;
  double value = 0.0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

}  // namespace

ExpressionParseError::ExpressionParseError(std::size_t position,
                                           const std::string& message)
    : Error(ErrorCode::ExpressionParseError,
            message + " at position " + std::to_string(position)),
      position_(position) {}

namespace {

class Builder {
 public:

  template <class OpT>
  static NodePtr leaf(OpT op, double v) {
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->value = v;
    return n;
  }

  template <class OpT>
  static NodePtr make(OpT op, NodePtr a, NodePtr b = nullptr) {
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
  }
};

}  // namespace

namespace {

// Simplifying node constructors, symbolic differentiation and printing.
struct ExprImpl {
  using OpCode = Expression::OpCode;
  using Node = Expression::Node;

  static NodePtr num(double v) { return Builder::leaf(OpCode::Const, v); }
  static NodePtr var() { return Builder::leaf(OpCode::Var, 0.0); }

  static bool is_const(const NodePtr& n, double v) {
    return n->op == OpCode::Const && n->value == v;
  }

  static NodePtr add(NodePtr a, NodePtr b) {
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    if (a->op == OpCode::Const && b->op == OpCode::Const) return num(a->value + b->value);
    return Builder::make(OpCode::Add, std::move(a), std::move(b));
  }
  static NodePtr sub(NodePtr a, NodePtr b) {
    if (is_const(b, 0.0)) return a;
    if (is_const(a, 0.0)) return neg(std::move(b));
    if (a->op == OpCode::Const && b->op == OpCode::Const) return num(a->value - b->value);
    return Builder::make(OpCode::Sub, std::move(a), std::move(b));
  }
  static NodePtr mul(NodePtr a, NodePtr b) {
    if (is_const(a, 0.0) || is_const(b, 0.0)) return num(0.0);
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
    if (a->op == OpCode::Const && b->op == OpCode::Const) return num(a->value * b->value);
    return Builder::make(OpCode::Mul, std::move(a), std::move(b));
  }
  static NodePtr div(NodePtr a, NodePtr b) {
    if (is_const(a, 0.0)) return num(0.0);
    if (is_const(b, 1.0)) return a;
    return Builder::make(OpCode::Div, std::move(a), std::move(b));
  }
  static NodePtr pow(NodePtr a, NodePtr b) {
    if (is_const(b, 1.0)) return a;
    if (is_const(b, 0.0)) return num(1.0);
    return Builder::make(OpCode::Pow, std::move(a), std::move(b));
  }
  static NodePtr neg(NodePtr a) {
    if (a->op == OpCode::Const) return num(-a->value);
    if (a->op == OpCode::Neg) return a->lhs;
    return Builder::make(OpCode::Neg, std::move(a));
  }
  static NodePtr unary(OpCode op, NodePtr a) { return Builder::make(op, std::move(a)); }

  static NodePtr derive(const NodePtr& n) {
    switch (n->op) {
      case OpCode::Const: return num(0.0);
      case OpCode::Var: return num(1.0);
      case OpCode::Add: return add(derive(n->lhs), derive(n->rhs));
      case OpCode::Sub: return sub(derive(n->lhs), derive(n->rhs));
      case OpCode::Mul:
        return add(mul(derive(n->lhs), n->rhs), mul(n->lhs, derive(n->rhs)));
      case OpCode::Div:
        return div(sub(mul(derive(n->lhs), n->rhs), mul(n->lhs, derive(n->rhs))),
                   mul(n->rhs, n->rhs));
      case OpCode::Neg: return neg(derive(n->lhs));
      case OpCode::Exp: return mul(n, derive(n->lhs));
      case OpCode::Log: return div(derive(n->lhs), n->lhs);
      case OpCode::Abs: return mul(unary(OpCode::Sign, n->lhs), derive(n->lhs));
      case OpCode::Sign: return num(0.0);
      case OpCode::Pow: {
        const NodePtr& f = n->lhs;
        const NodePtr& g = n->rhs;
        if (g->op == OpCode::Const) {
          return mul(mul(num(g->value), pow(f, num(g->value - 1.0))), derive(f));
        }
        // d(f^g) = f^g (g' log f + g f'/f)
        return mul(n, add(mul(derive(g), unary(OpCode::Log, f)),
                          div(mul(g, derive(f)), f)));
      }
    }
    return num(0.0);
  }

  static int precedence(const NodePtr& n) {
    switch (n->op) {
      case OpCode::Add:
      case OpCode::Sub: return 1;
      case OpCode::Mul:
      case OpCode::Div: return 2;
      case OpCode::Neg: return 3;
      case OpCode::Pow: return 4;
      default: return 5;
    }
  }

  static std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

  static std::string print(const NodePtr& n) {
    auto wrap = [](const NodePtr& c, int min_prec) {
      std::string s = print(c);
      return precedence(c) < min_prec ? "(" + s + ")" : s;
    };
    switch (n->op) {
      case OpCode::Const: {
        std::string s = format_number(n->value);
        return n->value < 0 ? "(" + s + ")" : s;
      }
      case OpCode::Var: return "x";
      case OpCode::Add: return wrap(n->lhs, 1) + " + " + wrap(n->rhs, 2);
      case OpCode::Sub: return wrap(n->lhs, 1) + " - " + wrap(n->rhs, 2);
      case OpCode::Mul: return wrap(n->lhs, 2) + " * " + wrap(n->rhs, 3);
      case OpCode::Div: return wrap(n->lhs, 2) + " / " + wrap(n->rhs, 3);
      case OpCode::Neg: return "-" + wrap(n->lhs, 4);
      case OpCode::Pow: return wrap(n->lhs, 5) + "^" + wrap(n->rhs, 4);
      case OpCode::Exp: return "exp(" + print(n->lhs) + ")";
      case OpCode::Log: return "log(" + print(n->lhs) + ")";
      case OpCode::Abs: return "abs(" + print(n->lhs) + ")";
      case OpCode::Sign: return "sign(" + print(n->lhs) + ")";
    }
    return "";
  }
};

class Parser {
 public:
  using OpCode = Expression::OpCode;

  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ExpressionParseError(pos_, msg); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' but input ended");
      fail(std::string("expected '") + c + "'");
    }
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = Builder::make(OpCode::Add, lhs, term());
      } else if (accept('-')) {
        lhs = Builder::make(OpCode::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = Builder::make(OpCode::Mul, lhs, unary());
      } else if (accept('/')) {
        lhs = Builder::make(OpCode::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return Builder::make(OpCode::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return Builder::make(OpCode::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    if (accept('(')) {
      NodePtr inner = expr();
      expect(')');
      return inner;
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        digits();
      } else {
        pos_ = save;
      }
    }
    double value = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
      pos_ = start;
      fail("malformed number");
    }
    return Builder::leaf(OpCode::Const, value);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "x") return Builder::leaf(OpCode::Var, 0.0);

    OpCode op;
    int arity = 1;
    if (name == "exp") {
      op = OpCode::Exp;
    } else if (name == "log") {
      op = OpCode::Log;
    } else if (name == "abs") {
      op = OpCode::Abs;
    } else if (name == "sign") {
      op = OpCode::Sign;
    } else if (name == "pow") {
      op = OpCode::Pow;
      arity = 2;
    } else {
      pos_ = start;
      fail("unknown identifier '" + std::string(name) + "'");
    }
    expect('(');
    NodePtr a = expr();
    NodePtr b;
    if (arity == 2) {
      expect(',');
      b = expr();
    }
    expect(')');
    return Builder::make(op, a, b);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression() : Expression(ExprImpl::num(0.0)) {}

Expression::Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) { compile(); }

Expression Expression::parse(std::string_view text) { return Expression(Parser(text).parse()); }

Expression Expression::constant(double value) { return Expression(ExprImpl::num(value)); }

Expression Expression::derivative() const { return Expression(ExprImpl::derive(root_)); }

std::string Expression::to_string() const { return ExprImpl::print(root_); }

bool Expression::is_constant() const {
  return std::none_of(program_.begin(), program_.end(),
                      [](const Instr& i) { return i.op == OpCode::Var; });
}

void Expression::compile() {
  program_.clear();
  std::size_t depth = 0;
  max_stack_ = 0;
  auto emit = [&](auto&& self, const NodePtr& n) -> void {
    if (n->lhs) self(self, n->lhs);
    if (n->rhs) self(self, n->rhs);
    program_.push_back(Instr{n->op, n->value});
    if (n->op == OpCode::Const || n->op == OpCode::Var) {
      ++depth;
    } else if (n->rhs) {
      --depth;
    }
    max_stack_ = std::max(max_stack_, depth);
  };
  emit(emit, root_);
}

double Expression::operator()(double x) const {
  constexpr std::size_t kInline = 32;
  double inline_stack[kInline] = {};
  std::vector<double> heap;
  double* st = inline_stack;
  if (max_stack_ > kInline) {
    heap.resize(max_stack_);
    st = heap.data();
  }
  std::size_t top = 0;
  for (const Instr& in : program_) {
    switch (in.op) {
      case OpCode::Const: st[top++] = in.value; break;
      case OpCode::Var: st[top++] = x; break;
      case OpCode::Add: --top; st[top - 1] += st[top]; break;
      case OpCode::Sub: --top; st[top - 1] -= st[top]; break;
      case OpCode::Mul: --top; st[top - 1] *= st[top]; break;
      case OpCode::Div: --top; st[top - 1] /= st[top]; break;
      case OpCode::Pow: --top; st[top - 1] = std::pow(st[top - 1], st[top]); break;
      case OpCode::Neg: st[top - 1] = -st[top - 1]; break;
      case OpCode::Exp: st[top - 1] = std::exp(st[top - 1]); break;
      case OpCode::Log: st[top - 1] = std::log(st[top - 1]); break;
      case OpCode::Abs: st[top - 1] = std::fabs(st[top - 1]); break;
      case OpCode::Sign: {
        const double v = st[top - 1];
        st[top - 1] = v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0);
        break;
      }
    }
  }
  return st[0];
}

}  // namespace diffscope
