#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "coarse/errors.hpp"

namespace coarse {

// Arithmetic expression in one variable `x`, parsed into an immutable tree.
//
// Grammar (EBNF):
//   expr    = term , { ("+" | "-") , term } ;
//   term    = unary , { ("*" | "/") , unary } ;
//   unary   = "-" , unary | power ;
//   power   = atom , [ "^" , unary ] ;            (right associative)
//   atom    = number | "x" | fn "(" expr { "," expr } ")" | "(" expr ")" ;
//   fn      = "exp" | "log" | "abs" | "min" | "max" ;
//
// Evaluation either returns a finite value or throws EvalError; non-finite
// intermediate results (log of a non-positive number, division by zero,
// fractional powers of negatives) are never propagated silently.
class Expression {
 public:
  struct Node;

  static Expression parse(std::string_view source);

  double eval(double x) const;

  // Canonical fully parenthesized form; parse(to_string()) rebuilds an
  // identical tree.
  std::string to_string() const;

  bool identical(const Expression& other) const;

  const Node& root() const { return *root_; }

 private:
  explicit Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

}  // namespace coarse
