#ifndef FVBEM_EXPRESSION_HPP_
#define FVBEM_EXPRESSION_HPP_

#include <functional>
#include <stdexcept>
#include <string>

namespace fvbem {

class ExpressionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Values of the free variables of an Expression. n1, n2 are the outward
/// normal components and are only meaningful for boundary data.
struct ExpressionVariables {
  double x1 = 0.0;
  double x2 = 0.0;
  double n1 = 0.0;
  double n2 = 0.0;
};

/// Small arithmetic expression over x1, x2, n1, n2.
///
/// Grammar: + - * / ^ (right associative), unary minus, parentheses, numbers,
/// the constant pi, and the functions sin cos tanh exp log sqrt abs.
class Expression {
 public:
  Expression() = default;
  static Expression parse(const std::string& text);
  static Expression constant(double value);

  double operator()(const ExpressionVariables& vars) const { return eval_(vars); }
  double operator()(double x1, double x2) const { return eval_({x1, x2, 0.0, 0.0}); }

  const std::string& text() const { return text_; }
  bool is_constant() const { return constant_; }
  bool uses_normal() const { return uses_normal_; }

 private:
  std::function<double(const ExpressionVariables&)> eval_;
  std::string text_;
  bool constant_ = false;
  bool uses_normal_ = false;
};

}  // namespace fvbem

#endif  // FVBEM_EXPRESSION_HPP_
