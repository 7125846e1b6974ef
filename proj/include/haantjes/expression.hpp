// Scalar expressions over canonical coordinates, with exact forward-mode
// differentiation. Trees are immutable and shared; an Expression is a cheap
// value type. Variables are stored positionally (q_i or p_i, zero-based), so
// the same tree can be evaluated at any point whose dimension covers it.
#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "haantjes/point.hpp"

namespace haantjes {

enum class ExprOp {
  Number,
  Var,
  Param,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Neg,
  Exp,
  Log,
  Sin,
  Cos,
  Sqrt,
};

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  ExprOp op = ExprOp::Number;
  double number = 0.0;       // Number
  int var = -1;              // Var: zero-based index
  bool var_is_p = false;     // Var: momentum slot
  std::string param;         // Param: name
  double param_value = 0.0;  // Param: bound value
  ExprPtr a, b;              // operands
  bool has_var = false;      // any Var in the subtree
};

class Expression {
 public:
  Expression();  // the constant 0
  explicit Expression(ExprPtr n) : node_(std::move(n)) {}

  static Expression number(double v);
  static Expression q(int i);  // zero-based
  static Expression p(int i);  // zero-based
  static Expression parameter(std::string name, double value);

  double eval(const PhasePoint& x) const;
  DualValue eval_dual(const PhasePoint& x) const;

  // Variable usage, split by block. Indices are zero-based.
  void variables(std::set<int>& q_used, std::set<int>& p_used) const;
  int max_var_index() const;  // -1 when constant
  bool is_constant() const;
  bool is_zero() const;

  std::string str() const;
  const ExprPtr& node() const { return node_; }

 private:
  ExprPtr node_;
};

Expression operator+(const Expression& a, const Expression& b);
Expression operator-(const Expression& a, const Expression& b);
Expression operator*(const Expression& a, const Expression& b);
Expression operator/(const Expression& a, const Expression& b);
Expression operator-(const Expression& a);
Expression pow(const Expression& a, const Expression& b);
Expression pow(const Expression& a, double k);
Expression exp(const Expression& a);
Expression log(const Expression& a);
Expression sin(const Expression& a);
Expression cos(const Expression& a);
Expression sqrt(const Expression& a);

// Parse `text` over coordinates q1..qn, p1..pn. Identifiers that are not
// coordinates must appear in `params` and are bound to their values.
// Grammar (binary ^ is right-associative, unary minus binds tighter than ^):
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := unary ("^" factor)?
//   unary  := "-" unary | atom
//   atom   := NUMBER | IDENT | IDENT "(" expr ")" | "(" expr ")"
Expression parse_expression(std::string_view text, int n,
                            const std::map<std::string, double>& params = {});

}  // namespace haantjes
