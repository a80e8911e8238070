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

#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "diffscope/error.hpp"

namespace diffscope {

// Coefficient expressions in one variable `x`:
//   literals, x, + - * / ^ (right associative), unary minus,
//   exp(e), log(e), abs(e), sign(e), pow(e, e).
// Evaluation runs a compiled postfix program, so an Expression is cheap to
// call from quadrature inner loops and safe to share between threads.
class Expression {
 public:
  struct Node;
  enum class OpCode : unsigned char;

  Expression();

  static Expression parse(std::string_view text);
  static Expression constant(double value);

  double operator()(double x) const;

  Expression derivative() const;

  // Canonical text; parse(to_string()) evaluates identically.
  std::string to_string() const;

  // True when the value does not depend on x.
  bool is_constant() const;

 private:
  struct Instr {
    OpCode op;
    double value;
  };

  explicit Expression(std::shared_ptr<const Node> root);
  void compile();

  std::shared_ptr<const Node> root_;
  std::vector<Instr> program_;
  std::size_t max_stack_ = 0;
};

class ExpressionParseError : public Error {
 public:
  ExpressionParseError(std::size_t position, const std::string& message);

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace diffscope
