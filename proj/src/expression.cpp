#include "fvbem/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>

namespace fvbem {

namespace {

using Eval = std::function<double(const ExpressionVariables&)>;

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  Eval parse() {
    Eval e = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

  bool constant = true;
  bool uses_normal = false;

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ExpressionError("expression '" + text_ + "' at position " + std::to_string(pos_) +
                          ": " + what);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Eval expr() {
    Eval lhs = term();
    while (true) {
      if (accept('+')) {
        Eval rhs = term();
        lhs = [lhs, rhs](const ExpressionVariables& v) { return lhs(v) + rhs(v); };
      } else if (accept('-')) {
        Eval rhs = term();
        lhs = [lhs, rhs](const ExpressionVariables& v) { return lhs(v) - rhs(v); };
      } else {
        return lhs;
      }
    }
  }

  Eval term() {
    Eval lhs = unary();
    while (true) {
      if (accept('*')) {
        Eval rhs = unary();
        lhs = [lhs, rhs](const ExpressionVariables& v) { return lhs(v) * rhs(v); };
      } else if (accept('/')) {
        Eval rhs = unary();
        lhs = [lhs, rhs](const ExpressionVariables& v) { return lhs(v) / rhs(v); };
      } else {
        return lhs;
      }
    }
  }

  Eval unary() {
    if (accept('-')) {
      Eval arg = unary();
      return [arg](const ExpressionVariables& v) { return -arg(v); };
    }
    if (accept('+')) return unary();
    return power();
  }

  Eval power() {
    Eval base = primary();
    if (accept('^')) {
      Eval exponent = unary();
      return [base, exponent](const ExpressionVariables& v) {
        return std::pow(base(v), exponent(v));
      };
    }
    return base;
  }

  Eval primary() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (accept('(')) {
      Eval inner = expr();
      if (!accept(')')) fail("missing ')'");
      return inner;
    }
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = text_.c_str() + pos_;
      char* end = nullptr;
      const double value = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      return [value](const ExpressionVariables&) { return value; };
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string name = text_.substr(start, pos_ - start);
      if (name == "x1") { constant = false; return [](const ExpressionVariables& v) { return v.x1; }; }
      if (name == "x2") { constant = false; return [](const ExpressionVariables& v) { return v.x2; }; }
      if (name == "n1") { constant = false; uses_normal = true; return [](const ExpressionVariables& v) { return v.n1; }; }
      if (name == "n2") { constant = false; uses_normal = true; return [](const ExpressionVariables& v) { return v.n2; }; }
      if (name == "pi") return [](const ExpressionVariables&) { return std::numbers::pi; };
      double (*fn)(double) = nullptr;
      if (name == "sin") fn = [](double a) { return std::sin(a); };
      else if (name == "cos") fn = [](double a) { return std::cos(a); };
      else if (name == "tanh") fn = [](double a) { return std::tanh(a); };
      else if (name == "exp") fn = [](double a) { return std::exp(a); };
      else if (name == "log") fn = [](double a) { return std::log(a); };
      else if (name == "sqrt") fn = [](double a) { return std::sqrt(a); };
      else if (name == "abs") fn = [](double a) { return std::abs(a); };
      else fail("unknown identifier '" + name + "'");
      if (!accept('(')) fail("expected '(' after " + name);
      Eval arg = expr();
      if (!accept(')')) fail("missing ')'");
      return [fn, arg](const ExpressionVariables& v) { return fn(arg(v)); };
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text) {
  Parser parser(text);
  Expression e;
  e.eval_ = parser.parse();
  e.text_ = text;
  e.constant_ = parser.constant;
  e.uses_normal_ = parser.uses_normal;
  return e;
}

Expression Expression::constant(double value) {
  Expression e;
  e.eval_ = [value](const ExpressionVariables&) { return value; };
  e.text_ = std::to_string(value);
  e.constant_ = true;
  return e;
}

}  // namespace fvbem
