#pragma once

// Tiny closed-form expression grammar for configuring fields over torus
// coordinates: literals, x1..x3, pi, + - * /, unary minus, sin, cos, exp,
// min, max, parentheses. Anything richer comes in via field-dump files.

#include <memory>
#include <stdexcept>
#include <string>

namespace kwcli {

class ExprError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Expr {
 public:
  /// Throws ExprError on malformed input.
  static Expr parse(const std::string& text, int dim);

  double eval(const double* x) const;

  Expr(Expr&&) noexcept;
  Expr& operator=(Expr&&) noexcept;
  ~Expr();

  struct Node;  // defined in expr.cpp

 private:
  explicit Expr(std::unique_ptr<Node> root);
  std::unique_ptr<Node> root_;
};

}  // namespace kwcli
