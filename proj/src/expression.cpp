#include "relmech/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "relmech/error.hpp"

namespace relmech {

struct Expression::Node {
  enum class Op { Constant, Variable, Neg, Add, Sub, Mul, Div, Pow, Call };
  using Fn = double (*)(double);

  Op op = Op::Constant;
  double value = 0;
  std::size_t index = 0;
  Fn fn = nullptr;
  std::shared_ptr<const Node> lhs, rhs;

  double eval(std::span<const double> vars) const {
    switch (op) {
      case Op::Constant: return value;
      case Op::Variable: return vars[index];
      case Op::Neg: return -lhs->eval(vars);
      case Op::Add: return lhs->eval(vars) + rhs->eval(vars);
      case Op::Sub: return lhs->eval(vars) - rhs->eval(vars);
      case Op::Mul: return lhs->eval(vars) * rhs->eval(vars);
      case Op::Div: return lhs->eval(vars) / rhs->eval(vars);
      case Op::Pow: {
        const double base = lhs->eval(vars);
        if (rhs->op == Op::Constant && rhs->value == 2) return base * base;
        return std::pow(base, rhs->eval(vars));
      }
      case Op::Call: return fn(lhs->eval(vars));
    }
    return 0;
  }
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

struct Function {
  std::string_view name;
  Node::Fn fn;
};

const Function kFunctions[] = {
    {"sin", [](double x) { return std::sin(x); }},   {"cos", [](double x) { return std::cos(x); }},
    {"tan", [](double x) { return std::tan(x); }},   {"exp", [](double x) { return std::exp(x); }},
    {"log", [](double x) { return std::log(x); }},   {"sqrt", [](double x) { return std::sqrt(x); }},
    {"abs", [](double x) { return std::abs(x); }},   {"tanh", [](double x) { return std::tanh(x); }},
    {"cosh", [](double x) { return std::cosh(x); }}, {"sinh", [](double x) { return std::sinh(x); }},
};

NodePtr constant(double v) {
  auto n = std::make_shared<Node>();
  n->value = v;
  return n;
}

NodePtr binary(Node::Op op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

class Parser {
 public:
  Parser(std::string_view src, const std::vector<std::string>& vars) : src_(src), vars_(vars) {}

  NodePtr parse() {
    NodePtr root = expr();
    skip();
    if (pos_ != src_.size()) error("unexpected '" + std::string(1, src_[pos_]) + "'");
    return root;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorKind::Config, "expression '" + std::string(src_) + "' column " + std::to_string(pos_ + 1) + ": " + what);
  }

  void skip() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = binary(Node::Op::Add, lhs, term());
      else if (accept('-')) lhs = binary(Node::Op::Sub, lhs, term());
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = binary(Node::Op::Mul, lhs, unary());
      else if (accept('/')) lhs = binary(Node::Op::Div, lhs, unary());
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) {
      auto n = std::make_shared<Node>();
      n->op = Node::Op::Neg;
      n->lhs = unary();
      return n;
    }
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) return binary(Node::Op::Pow, base, unary());
    return base;
  }

  NodePtr atom() {
    skip();
    if (pos_ >= src_.size()) error("unexpected end of expression");
    if (accept('(')) {
      NodePtr inner = expr();
      if (!accept(')')) error("expected ')'");
      return inner;
    }
    const char ch = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      const std::string rest(src_.substr(pos_));
      char* end = nullptr;
      const double v = std::strtod(rest.c_str(), &end);
      if (end == rest.c_str()) error("malformed number");
      pos_ += static_cast<std::size_t>(end - rest.c_str());
      return constant(v);
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      const std::size_t start = pos_;
      while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
      const std::string_view name = src_.substr(start, pos_ - start);
      if (accept('(')) {
        for (const auto& f : kFunctions) {
          if (f.name != name) continue;
          auto n = std::make_shared<Node>();
          n->op = Node::Op::Call;
          n->fn = f.fn;
          n->lhs = expr();
          if (!accept(')')) error("expected ')' after function argument");
          return n;
        }
        pos_ = start;
        error("unknown function '" + std::string(name) + "'");
      }
      for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (vars_[i] != name) continue;
        auto n = std::make_shared<Node>();
        n->op = Node::Op::Variable;
        n->index = i;
        return n;
      }
      if (name == "pi") return constant(std::numbers::pi);
      pos_ = start;
      error("unknown identifier '" + std::string(name) + "'");
    }
    error("unexpected '" + std::string(1, ch) + "'");
  }

  std::string_view src_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression(std::string_view source, std::vector<std::string> variables)
    : source_(source), variables_(std::move(variables)) {
  root_ = Parser(source_, variables_).parse();
}

double Expression::operator()(std::span<const double> values) const {
  if (values.size() != variables_.size())
    fail(ErrorKind::InvalidArgument, "expression expects " + std::to_string(variables_.size()) + " values");
  return root_->eval(values);
}

}  // namespace relmech
