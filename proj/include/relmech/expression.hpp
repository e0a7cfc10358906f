#pragma once

// Arithmetic expressions over named variables, for user potentials and
// Lienard coefficient functions given as strings in configs.
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := ('+' | '-') unary | power
//   power  := atom ('^' unary)?
//   atom   := number | name | name '(' expr ')' | '(' expr ')'
//
// Functions: sin cos tan exp log sqrt abs tanh cosh sinh. Constant: pi.

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace relmech {

class Expression {
 public:
  /// Throws Error{Config} naming the offending column on a parse failure or
  /// an unknown identifier.
  Expression(std::string_view source, std::vector<std::string> variables);

  double operator()(std::span<const double> values) const;
  double operator()(double value) const { return (*this)(std::span<const double>(&value, 1)); }

  const std::string& source() const { return source_; }
  const std::vector<std::string>& variables() const { return variables_; }

  struct Node;

 private:
  std::string source_;
  std::vector<std::string> variables_;
  std::shared_ptr<const Node> root_;
};

}  // namespace relmech
