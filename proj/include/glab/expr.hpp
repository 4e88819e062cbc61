#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace glab {

// A scalar function of one variable parsed from a tiny grammar:
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := ('+'|'-') unary | power
//   power  := atom ('^' unary)?
//   atom   := number | 'pi' | <variable> | ('sin'|'cos') '(' expr ')' | '(' expr ')'
// The variable name is fixed at parse time ("s" for modulation profiles,
// "theta" for boundary functions). Derivatives are exact (forward mode).
class Expression {
 public:
  Expression();  // the constant 0
  static Expression parse(std::string_view text, std::string_view variable);
  static Expression constant(double value);

  double operator()(double x) const;
  double derivative(double x) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace glab
