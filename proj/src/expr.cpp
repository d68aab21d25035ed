#include "rfs/expr.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include <fmt/core.h>

#include "rfs/errors.hpp"

namespace rfs {

struct Expression::Node {
  enum class Op {
    constant,
    variable,
    add,
    sub,
    mul,
    div,
    pow,
    neg,
    log,
    sqrt,
    exp,
    abs,
    min,
    max,
  };
  Op op = Op::constant;
  double value = 0.0;
  std::shared_ptr<const Node> lhs, rhs;

  double eval(double k) const {
    switch (op) {
      case Op::constant: return value;
      case Op::variable: return k;
      case Op::add: return lhs->eval(k) + rhs->eval(k);
      case Op::sub: return lhs->eval(k) - rhs->eval(k);
      case Op::mul: return lhs->eval(k) * rhs->eval(k);
      case Op::div: return lhs->eval(k) / rhs->eval(k);
      case Op::pow: return std::pow(lhs->eval(k), rhs->eval(k));
      case Op::neg: return -lhs->eval(k);
      case Op::log: return std::log(lhs->eval(k));
      case Op::sqrt: return std::sqrt(lhs->eval(k));
      case Op::exp: return std::exp(lhs->eval(k));
      case Op::abs: return std::fabs(lhs->eval(k));
      case Op::min: return std::min(lhs->eval(k), rhs->eval(k));
      case Op::max: return std::max(lhs->eval(k), rhs->eval(k));
    }
    return 0.0;
  }

  bool constant_only() const {
    if (op == Op::variable) return false;
    if (lhs && !lhs->constant_only()) return false;
    if (rhs && !rhs->constant_only()) return false;
    return true;
  }
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr, double v = 0.0) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->value = v;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr parse() {
    auto e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError(
        fmt::format("expression error at column {}: {} in \"{}\"", pos_ + 1, what, text_));
  }

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_expr() {
    auto lhs = parse_term();
    for (;;) {
      if (consume('+')) lhs = make(Node::Op::add, lhs, parse_term());
      else if (consume('-')) lhs = make(Node::Op::sub, lhs, parse_term());
      else return lhs;
    }
  }

  NodePtr parse_term() {
    auto lhs = parse_factor();
    for (;;) {
      if (consume('*')) lhs = make(Node::Op::mul, lhs, parse_factor());
      else if (consume('/')) lhs = make(Node::Op::div, lhs, parse_factor());
      else return lhs;
    }
  }

  // '-' binds looser than '^': -k^2 parses as -(k^2).
  NodePtr parse_factor() {
    skip_ws();
    if (consume('-')) return make(Node::Op::neg, parse_factor());
    auto base = parse_primary();
    if (consume('^')) return make(Node::Op::pow, base, parse_factor());
    return base;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      auto e = parse_expr();
      if (!consume(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
    fail(fmt::format("unexpected character '{}'", c));
  }

  NodePtr parse_number() {
    const char* begin = text_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    return make(Node::Op::constant, nullptr, nullptr, v);
  }

  NodePtr parse_ident() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isalnum(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    const std::string name = text_.substr(start, pos_ - start);
    if (name == "k") return make(Node::Op::variable);
    if (name == "pi") return make(Node::Op::constant, nullptr, nullptr, M_PI);

    Node::Op op;
    int arity = 1;
    if (name == "log") op = Node::Op::log;
    else if (name == "sqrt") op = Node::Op::sqrt;
    else if (name == "exp") op = Node::Op::exp;
    else if (name == "abs") op = Node::Op::abs;
    else if (name == "min") { op = Node::Op::min; arity = 2; }
    else if (name == "max") { op = Node::Op::max; arity = 2; }
    else fail(fmt::format("unknown identifier '{}'", name));

    if (!consume('(')) fail(fmt::format("expected '(' after '{}'", name));
    auto a = parse_expr();
    NodePtr b;
    if (arity == 2) {
      if (!consume(',')) fail("expected ','");
      b = parse_expr();
    }
    if (!consume(')')) fail("expected ')'");
    return make(op, a, b);
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression() : Expression(0.0) {}

Expression::Expression(double value)
    : root_(make(Node::Op::constant, nullptr, nullptr, value)),
      text_(fmt::format("{}", value)) {}

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.root_ = Parser(text).parse();
  e.text_ = text;
  return e;
}

double Expression::eval(double k) const { return root_->eval(k); }

bool Expression::is_constant() const { return root_->constant_only(); }

}  // namespace rfs
