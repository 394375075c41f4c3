#pragma once

#include <cctype>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "condeg/field.hpp"
#include "condeg/jet.hpp"

namespace condeg {

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t position)
      : std::runtime_error(msg + " at position " + std::to_string(position)),
        pos(position) {}
  std::size_t pos;
};

namespace expr {

enum class Op { kConst, kVar, kAdd, kSub, kMul, kDiv, kPow, kFunc };
enum class Func { kSin, kCos, kExp, kSqrt, kAbsSmooth };

struct Node {
  Op op;
  double constant = 0.0;      // kConst
  int var = 0;                // kVar (0-based)
  int exponent = 0;           // kPow
  Func func = Func::kSin;     // kFunc
  double eps = 1e-2;          // kFunc kAbsSmooth
  std::unique_ptr<Node> lhs, rhs;
};

using NodePtr = std::unique_ptr<Node>;

inline Jet eval(const Node& node, const Vec& z, int n, int order) {
  switch (node.op) {
    case Op::kConst:
      return Jet::constant(node.constant, n, order);
    case Op::kVar:
      return Jet::variable(node.var, z[node.var], n, order);
    case Op::kAdd:
      return eval(*node.lhs, z, n, order) + eval(*node.rhs, z, n, order);
    case Op::kSub:
      return eval(*node.lhs, z, n, order) - eval(*node.rhs, z, n, order);
    case Op::kMul:
      return eval(*node.lhs, z, n, order) * eval(*node.rhs, z, n, order);
    case Op::kDiv:
      return eval(*node.lhs, z, n, order) / eval(*node.rhs, z, n, order);
    case Op::kPow:
      return jet_pow(eval(*node.lhs, z, n, order), node.exponent);
    case Op::kFunc: {
      Jet u = eval(*node.lhs, z, n, order);
      switch (node.func) {
        case Func::kSin: return jet_sin(u);
        case Func::kCos: return jet_cos(u);
        case Func::kExp: return jet_exp(u);
        case Func::kSqrt: return jet_sqrt(u);
        case Func::kAbsSmooth: return jet_abs_smooth(u, node.eps);
      }
    }
  }
  throw std::logic_error("expr: unreachable");
}

// Recursive descent over:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' integer)?
//   base   := number | 'x'digit | '(' expr ')' | func '(' expr ')'
class Parser {
 public:
  Parser(std::string text, int n) : text_(std::move(text)), n_(n) {}

  NodePtr parse() {
    NodePtr root = parse_expr();
    skip_ws();
    if (pos_ != text_.size())
      throw ParseError("unexpected trailing input", pos_);
    return root;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool accept(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_expr() {
    NodePtr lhs;
    if (accept('-')) {
      // Leading unary minus, parsed as 0 - term.
      auto zero = std::make_unique<Node>();
      zero->op = Op::kConst;
      auto node = std::make_unique<Node>();
      node->op = Op::kSub;
      node->lhs = std::move(zero);
      node->rhs = parse_term();
      lhs = std::move(node);
    } else {
      lhs = parse_term();
    }
    for (;;) {
      if (accept('+')) {
        auto node = std::make_unique<Node>();
        node->op = Op::kAdd;
        node->lhs = std::move(lhs);
        node->rhs = parse_term();
        lhs = std::move(node);
      } else if (accept('-')) {
        auto node = std::make_unique<Node>();
        node->op = Op::kSub;
        node->lhs = std::move(lhs);
        node->rhs = parse_term();
        lhs = std::move(node);
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_factor();
    for (;;) {
      if (accept('*')) {
        auto node = std::make_unique<Node>();
        node->op = Op::kMul;
        node->lhs = std::move(lhs);
        node->rhs = parse_factor();
        lhs = std::move(node);
      } else if (accept('/')) {
        auto node = std::make_unique<Node>();
        node->op = Op::kDiv;
        node->lhs = std::move(lhs);
        node->rhs = parse_factor();
        lhs = std::move(node);
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_factor() {
    NodePtr base = parse_base();
    if (accept('^')) {
      skip_ws();
      std::size_t start = pos_;
      int exp = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        exp = exp * 10 + (text_[pos_] - '0');
        ++pos_;
      }
      if (pos_ == start) throw ParseError("expected integer exponent", pos_);
      auto node = std::make_unique<Node>();
      node->op = Op::kPow;
      node->exponent = exp;
      node->lhs = std::move(base);
      return node;
    }
    return base;
  }

  NodePtr parse_base() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  NodePtr parse_number() {
    std::size_t start = pos_;
    std::size_t end = pos_;
    while (end < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[end])) || text_[end] == '.' ||
            text_[end] == 'e' || text_[end] == 'E' ||
            ((text_[end] == '+' || text_[end] == '-') && end > start &&
             (text_[end - 1] == 'e' || text_[end - 1] == 'E'))))
      ++end;
    std::size_t consumed = 0;
    double v = 0.0;
    try {
      v = std::stod(text_.substr(start, end - start), &consumed);
    } catch (const std::exception&) {
      throw ParseError("malformed number", start);
    }
    pos_ = start + consumed;
    auto node = std::make_unique<Node>();
    node->op = Op::kConst;
    node->constant = v;
    return node;
  }

  NodePtr parse_ident() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string name = text_.substr(start, pos_ - start);
    // "abs-smooth" carries a hyphen; stitch it back together.
    if (name == "abs" && text_.compare(pos_, 7, "-smooth") == 0) {
      pos_ += 7;
      name = "abs_smooth";
    }
    if (name.size() == 2 && name[0] == 'x' && std::isdigit(static_cast<unsigned char>(name[1]))) {
      int idx = name[1] - '0';
      if (idx < 1 || idx > n_)
        throw ParseError("variable " + name + " exceeds dimension " +
                             std::to_string(n_),
                         start);
      auto node = std::make_unique<Node>();
      node->op = Op::kVar;
      node->var = idx - 1;
      return node;
    }
    Func func;
    if (name == "sin") func = Func::kSin;
    else if (name == "cos") func = Func::kCos;
    else if (name == "exp") func = Func::kExp;
    else if (name == "sqrt") func = Func::kSqrt;
    else if (name == "abs_smooth") func = Func::kAbsSmooth;
    else throw ParseError("unknown identifier '" + name + "'", start);
    if (!accept('(')) throw ParseError("expected '(' after function name", pos_);
    auto node = std::make_unique<Node>();
    node->op = Op::kFunc;
    node->func = func;
    node->lhs = parse_expr();
    if (!accept(')')) throw ParseError("expected ')'", pos_);
    return node;
  }

  std::string text_;
  int n_;
  std::size_t pos_ = 0;
};

}  // namespace expr

class ExpressionField final : public ScalarField {
 public:
  ExpressionField(expr::NodePtr root, int n) : root_(std::move(root)), n_(n) {}
  int dim() const override { return n_; }
  Jet jet(const Vec& z, int order) const override {
    if (order < 0 || order > 3)
      throw std::invalid_argument("ExpressionField: order must be in [0,3]");
    return expr::eval(*root_, z, n_, order);
  }

 private:
  expr::NodePtr root_;
  int n_;
};

inline FieldPtr parse_field(const std::string& text, int n) {
  if (n < 1 || n > kMaxDim)
    throw std::invalid_argument("parse_field: dimension must be in [1,3]");
  expr::Parser parser(text, n);
  return std::make_shared<ExpressionField>(parser.parse(), n);
}

}  // namespace condeg
