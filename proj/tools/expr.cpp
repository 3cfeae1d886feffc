#include "expr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

namespace kwcli {

struct Expr::Node {
  enum class Op { literal, coord, add, sub, mul, div, neg, sin, cos, exp, min, max };
  Op op;
  double value = 0.0;  // literal
  int axis = 0;        // coord
  std::unique_ptr<Node> lhs, rhs;

  double eval(const double* x) const {
    switch (op) {
      case Op::literal: return value;
      case Op::coord: return x[axis];
      case Op::add: return lhs->eval(x) + rhs->eval(x);
      case Op::sub: return lhs->eval(x) - rhs->eval(x);
      case Op::mul: return lhs->eval(x) * rhs->eval(x);
      case Op::div: return lhs->eval(x) / rhs->eval(x);
      case Op::neg: return -lhs->eval(x);
      case Op::sin: return std::sin(lhs->eval(x));
      case Op::cos: return std::cos(lhs->eval(x));
      case Op::exp: return std::exp(lhs->eval(x));
      case Op::min: return std::min(lhs->eval(x), rhs->eval(x));
      case Op::max: return std::max(lhs->eval(x), rhs->eval(x));
    }
    throw ExprError("corrupt expression tree");
  }
};

namespace {

using Node = Expr::Node;
using NodePtr = std::unique_ptr<Node>;

NodePtr make(Node::Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_unique<Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  Parser(const std::string& text, int dim) : text_(text), dim_(dim) {}

  NodePtr run() {
    NodePtr e = expression();
    skip_ws();
    if (pos_ != text_.size())
      throw ExprError("unexpected trailing input at position " +
                      std::to_string(pos_));
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  NodePtr expression() {
    NodePtr lhs = term();
    for (;;) {
      if (consume('+'))
        lhs = make(Node::Op::add, std::move(lhs), term());
      else if (consume('-'))
        lhs = make(Node::Op::sub, std::move(lhs), term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      if (consume('*'))
        lhs = make(Node::Op::mul, std::move(lhs), factor());
      else if (consume('/'))
        lhs = make(Node::Op::div, std::move(lhs), factor());
      else
        return lhs;
    }
  }

  NodePtr factor() {
    if (consume('-')) return make(Node::Op::neg, factor());
    if (consume('+')) return factor();
    return primary();
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= text_.size()) throw ExprError("unexpected end of expression");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    if (consume('(')) {
      NodePtr e = expression();
      if (!consume(')')) throw ExprError("missing closing parenthesis");
      return e;
    }
    throw ExprError(std::string("unexpected character '") + c + "' at position " +
                    std::to_string(pos_));
  }

  NodePtr number() {
    const std::size_t start = pos_;
    std::size_t consumed = 0;
    double v = 0.0;
    try {
      v = std::stod(text_.substr(start), &consumed);
    } catch (const std::exception&) {
      throw ExprError("malformed number at position " + std::to_string(start));
    }
    pos_ = start + consumed;
    auto n = make(Node::Op::literal);
    n->value = v;
    return n;
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string name = text_.substr(start, pos_ - start);

    if (name == "pi") {
      auto n = make(Node::Op::literal);
      n->value = std::numbers::pi;
      return n;
    }
    if (name.size() == 2 && name[0] == 'x' && name[1] >= '1' && name[1] <= '3') {
      const int axis = name[1] - '1';
      if (axis >= dim_)
        throw ExprError("coordinate " + name + " exceeds the grid dimension");
      auto n = make(Node::Op::coord);
      n->axis = axis;
      return n;
    }

    Node::Op op;
    int arity = 1;
    if (name == "sin") op = Node::Op::sin;
    else if (name == "cos") op = Node::Op::cos;
    else if (name == "exp") op = Node::Op::exp;
    else if (name == "min") { op = Node::Op::min; arity = 2; }
    else if (name == "max") { op = Node::Op::max; arity = 2; }
    else throw ExprError("unknown identifier '" + name + "'");

    if (!consume('(')) throw ExprError("expected '(' after " + name);
    NodePtr first = expression();
    NodePtr second;
    if (arity == 2) {
      if (!consume(',')) throw ExprError(name + " takes two arguments");
      second = expression();
    }
    if (!consume(')')) throw ExprError("missing ')' in call to " + name);
    return make(op, std::move(first), std::move(second));
  }

  const std::string& text_;
  int dim_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr Expr::parse(const std::string& text, int dim) {
  return Expr(Parser(text, dim).run());
}

double Expr::eval(const double* x) const { return root_->eval(x); }

Expr::Expr(std::unique_ptr<Node> root) : root_(std::move(root)) {}
Expr::Expr(Expr&&) noexcept = default;
Expr& Expr::operator=(Expr&&) noexcept = default;
Expr::~Expr() = default;

}  // namespace kwcli
