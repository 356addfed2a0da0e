#include "hausd/expr.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace hausd::expr {

struct Expression::Node {
  enum class Op { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Abs, Exp, Log, Min, Max };
  Op op = Op::Const;
  double value = 0.0;
  int var = -1;  // 0-based index into u
  std::shared_ptr<const Node> a, b;

  double eval(const Eigen::VectorXd& u) const {
    switch (op) {
      case Op::Const: return value;
      case Op::Var:
        if (var >= u.size())
          throw std::invalid_argument("expression variable u" + std::to_string(var + 1) +
                                      " out of range for " + std::to_string(u.size()) +
                                      " parameters");
        return u[var];
      case Op::Add: return a->eval(u) + b->eval(u);
      case Op::Sub: return a->eval(u) - b->eval(u);
      case Op::Mul: return a->eval(u) * b->eval(u);
      case Op::Div: return a->eval(u) / b->eval(u);
      case Op::Pow: return std::pow(a->eval(u), b->eval(u));
      case Op::Neg: return -a->eval(u);
      case Op::Abs: return std::abs(a->eval(u));
      case Op::Exp: return std::exp(a->eval(u));
      case Op::Log: return std::log(a->eval(u));
      case Op::Min: return std::min(a->eval(u), b->eval(u));
      case Op::Max: return std::max(a->eval(u), b->eval(u));
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

NodePtr make(Node::Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr make_const(double v) {
  auto n = std::make_shared<Node>();
  n->op = Node::Op::Const;
  n->value = v;
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr e = sum();
    skip_ws();
    if (pos_ != s_.size())
      throw std::invalid_argument("trailing input in expression at position " +
                                  std::to_string(pos_) + ": '" + s_ + "'");
    return e;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c))
      throw std::invalid_argument(std::string("expected '") + c + "' in expression '" + s_ + "'");
  }

  NodePtr sum() {
    NodePtr e = term();
    for (;;) {
      if (accept('+'))
        e = make(Node::Op::Add, e, term());
      else if (accept('-'))
        e = make(Node::Op::Sub, e, term());
      else
        return e;
    }
  }

  NodePtr term() {
    NodePtr e = unary();
    for (;;) {
      if (accept('*'))
        e = make(Node::Op::Mul, e, unary());
      else if (accept('/'))
        e = make(Node::Op::Div, e, unary());
      else
        return e;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Node::Op::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) return make(Node::Op::Pow, base, unary());  // right associative
    return base;
  }

  NodePtr atom() {
    skip_ws();
    if (pos_ >= s_.size()) throw std::invalid_argument("unexpected end of expression '" + s_ + "'");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = sum();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    throw std::invalid_argument(std::string("unexpected character '") + c + "' in expression '" +
                                s_ + "'");
  }

  NodePtr number() {
    std::size_t end = pos_;
    while (end < s_.size() &&
           (std::isdigit(static_cast<unsigned char>(s_[end])) || s_[end] == '.' ||
            s_[end] == 'e' || s_[end] == 'E' ||
            ((s_[end] == '+' || s_[end] == '-') && end > pos_ &&
             (s_[end - 1] == 'e' || s_[end - 1] == 'E'))))
      ++end;
    double v = std::stod(s_.substr(pos_, end - pos_));
    pos_ = end;
    return make_const(v);
  }

  NodePtr identifier() {
    std::size_t end = pos_;
    while (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_'))
      ++end;
    std::string name = s_.substr(pos_, end - pos_);
    pos_ = end;
    if (name == "pi") return make_const(std::acos(-1.0));
    if (name.size() >= 2 && name[0] == 'u') {
      bool digits = true;
      for (std::size_t i = 1; i < name.size(); ++i)
        digits = digits && std::isdigit(static_cast<unsigned char>(name[i]));
      if (digits) {
        auto n = std::make_shared<Node>();
        n->op = Node::Op::Var;
        n->var = std::stoi(name.substr(1)) - 1;
        if (n->var < 0) throw std::invalid_argument("variables are u1, u2, ...");
        return n;
      }
    }
    // one- or two-argument functions
    expect('(');
    NodePtr a = sum();
    if (name == "abs" || name == "exp" || name == "log") {
      expect(')');
      Node::Op op = name == "abs" ? Node::Op::Abs : name == "exp" ? Node::Op::Exp : Node::Op::Log;
      return make(op, a);
    }
    if (name == "min" || name == "max") {
      expect(',');
      NodePtr b = sum();
      expect(')');
      return make(name == "min" ? Node::Op::Min : Node::Op::Max, a, b);
    }
    throw std::invalid_argument("unknown function '" + name + "' in expression '" + s_ + "'");
  }
};

}  // namespace

double Expression::operator()(const Eigen::VectorXd& u) const {
  if (!node_) throw std::logic_error("evaluating empty expression");
  return node_->eval(u);
}

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.node_ = Parser(text).parse();
  e.text_ = text;
  return e;
}

}  // namespace hausd::expr
