#include "haantjes/expression.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace haantjes {

namespace {

ExprPtr make_node(ExprNode n) {
  if (n.a) n.has_var |= n.a->has_var;
  if (n.b) n.has_var |= n.b->has_var;
  return std::make_shared<const ExprNode>(std::move(n));
}

ExprPtr number_node(double v) {
  ExprNode n;
  n.op = ExprOp::Number;
  n.number = v;
  return make_node(std::move(n));
}

bool is_num(const ExprPtr& e, double v) {
  return e->op == ExprOp::Number && e->number == v;
}

ExprPtr unary(ExprOp op, ExprPtr a) {
  ExprNode n;
  n.op = op;
  n.a = std::move(a);
  return make_node(std::move(n));
}

ExprPtr binary(ExprOp op, ExprPtr a, ExprPtr b) {
  ExprNode n;
  n.op = op;
  n.a = std::move(a);
  n.b = std::move(b);
  return make_node(std::move(n));
}

// ---------------------------------------------------------------------------
// evaluation
// ---------------------------------------------------------------------------

struct EvalCtx {
  const double* coords;
  int n;    // degrees of freedom of the point
  int dim;  // 2n
};

int var_slot(const ExprNode* e, const EvalCtx& c) {
  const int slot = e->var + (e->var_is_p ? c.n : 0);
  if (e->var < 0 || e->var >= c.n)
    throw DomainError("variable " + std::string(e->var_is_p ? "p" : "q") +
                      std::to_string(e->var + 1) + " out of range for a point with n = " +
                      std::to_string(c.n));
  return slot;
}

std::string node_str(const ExprNode* e);

[[noreturn]] void domain_fail(const char* what, const ExprNode* e) {
  throw DomainError(std::string(what) + " in '" + node_str(e) + "'");
}

double eval_node(const ExprNode* e, const EvalCtx& c) {
  switch (e->op) {
    case ExprOp::Number: return e->number;
    case ExprOp::Var: return c.coords[var_slot(e, c)];
    case ExprOp::Param: return e->param_value;
    case ExprOp::Add: return eval_node(e->a.get(), c) + eval_node(e->b.get(), c);
    case ExprOp::Sub: return eval_node(e->a.get(), c) - eval_node(e->b.get(), c);
    case ExprOp::Mul: return eval_node(e->a.get(), c) * eval_node(e->b.get(), c);
    case ExprOp::Div: {
      const double den = eval_node(e->b.get(), c);
      if (den == 0.0) domain_fail("division by zero", e);
      return eval_node(e->a.get(), c) / den;
    }
    case ExprOp::Pow: {
      const double base = eval_node(e->a.get(), c);
      const double ex = eval_node(e->b.get(), c);
      const double v = std::pow(base, ex);
      if (!std::isfinite(v)) domain_fail("power outside its domain", e);
      return v;
    }
    case ExprOp::Neg: return -eval_node(e->a.get(), c);
    case ExprOp::Exp: {
      const double v = std::exp(eval_node(e->a.get(), c));
      if (!std::isfinite(v)) domain_fail("exp overflow", e);
      return v;
    }
    case ExprOp::Log: {
      const double a = eval_node(e->a.get(), c);
      if (a <= 0.0) domain_fail("log of a non-positive value", e);
      return std::log(a);
    }
    case ExprOp::Sin: return std::sin(eval_node(e->a.get(), c));
    case ExprOp::Cos: return std::cos(eval_node(e->a.get(), c));
    case ExprOp::Sqrt: {
      const double a = eval_node(e->a.get(), c);
      if (a < 0.0) domain_fail("sqrt of a negative value", e);
      return std::sqrt(a);
    }
  }
  throw DomainError("corrupt expression node");
}

// Fixed-width dual register: value plus gradient over at most 2*kMaxDof slots.
struct Dual {
  double v = 0.0;
  std::array<double, 2 * kMaxDof> g{};
};

Dual eval_dual_node(const ExprNode* e, const EvalCtx& c) {
  switch (e->op) {
    case ExprOp::Number: {
      Dual r;
      r.v = e->number;
      return r;
    }
    case ExprOp::Param: {
      Dual r;
      r.v = e->param_value;
      return r;
    }
    case ExprOp::Var: {
      Dual r;
      r.v = c.coords[var_slot(e, c)];
      r.g[var_slot(e, c)] = 1.0;
      return r;
    }
    case ExprOp::Add: {
      Dual r = eval_dual_node(e->a.get(), c);
      const Dual y = eval_dual_node(e->b.get(), c);
      r.v += y.v;
      for (int i = 0; i < c.dim; ++i) r.g[i] += y.g[i];
      return r;
    }
    case ExprOp::Sub: {
      Dual r = eval_dual_node(e->a.get(), c);
      const Dual y = eval_dual_node(e->b.get(), c);
      r.v -= y.v;
      for (int i = 0; i < c.dim; ++i) r.g[i] -= y.g[i];
      return r;
    }
    case ExprOp::Mul: {
      const Dual x = eval_dual_node(e->a.get(), c);
      const Dual y = eval_dual_node(e->b.get(), c);
      Dual r;
      r.v = x.v * y.v;
      for (int i = 0; i < c.dim; ++i) r.g[i] = x.g[i] * y.v + x.v * y.g[i];
      return r;
    }
    case ExprOp::Div: {
      const Dual x = eval_dual_node(e->a.get(), c);
      const Dual y = eval_dual_node(e->b.get(), c);
      if (y.v == 0.0) domain_fail("division by zero", e);
      Dual r;
      r.v = x.v / y.v;
      for (int i = 0; i < c.dim; ++i) r.g[i] = (x.g[i] - r.v * y.g[i]) / y.v;
      return r;
    }
    case ExprOp::Neg: {
      Dual r = eval_dual_node(e->a.get(), c);
      r.v = -r.v;
      for (int i = 0; i < c.dim; ++i) r.g[i] = -r.g[i];
      return r;
    }
    case ExprOp::Exp: {
      Dual r = eval_dual_node(e->a.get(), c);
      const double v = std::exp(r.v);
      if (!std::isfinite(v)) domain_fail("exp overflow", e);
      r.v = v;
      for (int i = 0; i < c.dim; ++i) r.g[i] *= v;
      return r;
    }
    case ExprOp::Log: {
      Dual r = eval_dual_node(e->a.get(), c);
      if (r.v <= 0.0) domain_fail("log of a non-positive value", e);
      const double inv = 1.0 / r.v;
      r.v = std::log(r.v);
      for (int i = 0; i < c.dim; ++i) r.g[i] *= inv;
      return r;
    }
    case ExprOp::Sin: {
      Dual r = eval_dual_node(e->a.get(), c);
      const double dv = std::cos(r.v);
      r.v = std::sin(r.v);
      for (int i = 0; i < c.dim; ++i) r.g[i] *= dv;
      return r;
    }
    case ExprOp::Cos: {
      Dual r = eval_dual_node(e->a.get(), c);
      const double dv = -std::sin(r.v);
      r.v = std::cos(r.v);
      for (int i = 0; i < c.dim; ++i) r.g[i] *= dv;
      return r;
    }
    case ExprOp::Sqrt: {
      Dual r = eval_dual_node(e->a.get(), c);
      if (r.v < 0.0) domain_fail("sqrt of a negative value", e);
      const double v = std::sqrt(r.v);
      bool grad_zero = true;
      for (int i = 0; i < c.dim; ++i)
        if (r.g[i] != 0.0) grad_zero = false;
      if (r.v == 0.0 && !grad_zero) domain_fail("sqrt not differentiable at zero", e);
      r.v = v;
      if (!grad_zero) {
        const double dv = 0.5 / v;
        for (int i = 0; i < c.dim; ++i) r.g[i] *= dv;
      }
      return r;
    }
    case ExprOp::Pow: {
      const Dual x = eval_dual_node(e->a.get(), c);
      if (!e->b->has_var) {
        // constant exponent: d(x^k) = k x^(k-1) dx, valid for negative bases
        // with integer k. std::pow flags the invalid combinations itself.
        const double k = eval_node(e->b.get(), c);
        Dual r;
        r.v = std::pow(x.v, k);
        if (!std::isfinite(r.v)) domain_fail("power outside its domain", e);
        if (k == 0.0) return r;  // gradient identically zero
        const double d = k * std::pow(x.v, k - 1.0);
        bool grad_zero = true;
        for (int i = 0; i < c.dim; ++i)
          if (x.g[i] != 0.0) grad_zero = false;
        if (grad_zero) return r;
        if (!std::isfinite(d)) domain_fail("power not differentiable here", e);
        for (int i = 0; i < c.dim; ++i) r.g[i] = d * x.g[i];
        return r;
      }
      const Dual y = eval_dual_node(e->b.get(), c);
      if (x.v <= 0.0) domain_fail("variable exponent needs a positive base", e);
      Dual r;
      r.v = std::pow(x.v, y.v);
      if (!std::isfinite(r.v)) domain_fail("power outside its domain", e);
      const double lx = std::log(x.v);
      for (int i = 0; i < c.dim; ++i)
        r.g[i] = r.v * (y.g[i] * lx + y.v * x.g[i] / x.v);
      return r;
    }
  }
  throw DomainError("corrupt expression node");
}

// ---------------------------------------------------------------------------
// printing (used in error messages and diagnostics)
// ---------------------------------------------------------------------------

int precedence(ExprOp op) {
  switch (op) {
    case ExprOp::Add:
    case ExprOp::Sub: return 1;
    case ExprOp::Mul:
    case ExprOp::Div: return 2;
    case ExprOp::Neg: return 3;
    case ExprOp::Pow: return 4;
    default: return 5;
  }
}

void print_node(const ExprNode* e, int parent_prec, std::string& out) {
  const int prec = precedence(e->op);
  const bool parens = prec < parent_prec;
  if (parens) out += '(';
  switch (e->op) {
    case ExprOp::Number: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.12g", e->number);
      out += buf;
      break;
    }
    case ExprOp::Var:
      out += e->var_is_p ? 'p' : 'q';
      out += std::to_string(e->var + 1);
      break;
    case ExprOp::Param: out += e->param; break;
    case ExprOp::Add:
      print_node(e->a.get(), prec, out);
      out += " + ";
      print_node(e->b.get(), prec, out);
      break;
    case ExprOp::Sub:
      print_node(e->a.get(), prec, out);
      out += " - ";
      print_node(e->b.get(), prec + 1, out);
      break;
    case ExprOp::Mul:
      print_node(e->a.get(), prec, out);
      out += "*";
      print_node(e->b.get(), prec, out);
      break;
    case ExprOp::Div:
      print_node(e->a.get(), prec, out);
      out += "/";
      print_node(e->b.get(), prec + 1, out);
      break;
    case ExprOp::Pow:
      print_node(e->a.get(), prec + 1, out);
      out += "^";
      print_node(e->b.get(), prec, out);
      break;
    case ExprOp::Neg:
      out += "-";
      print_node(e->a.get(), prec, out);
      break;
    case ExprOp::Exp:
    case ExprOp::Log:
    case ExprOp::Sin:
    case ExprOp::Cos:
    case ExprOp::Sqrt: {
      switch (e->op) {
        case ExprOp::Exp: out += "exp"; break;
        case ExprOp::Log: out += "log"; break;
        case ExprOp::Sin: out += "sin"; break;
        case ExprOp::Cos: out += "cos"; break;
        default: out += "sqrt"; break;
      }
      out += '(';
      print_node(e->a.get(), 0, out);
      out += ')';
      break;
    }
  }
  if (parens) out += ')';
}

std::string node_str(const ExprNode* e) {
  std::string s;
  print_node(e, 0, s);
  return s;
}

void collect_vars(const ExprNode* e, std::set<int>& q_used, std::set<int>& p_used) {
  if (!e->has_var && e->op != ExprOp::Var) return;
  if (e->op == ExprOp::Var) {
    (e->var_is_p ? p_used : q_used).insert(e->var);
    return;
  }
  if (e->a) collect_vars(e->a.get(), q_used, p_used);
  if (e->b) collect_vars(e->b.get(), q_used, p_used);
}

}  // namespace

// ---------------------------------------------------------------------------
// Expression
// ---------------------------------------------------------------------------

Expression::Expression() : node_(number_node(0.0)) {}

Expression Expression::number(double v) { return Expression(number_node(v)); }

Expression Expression::q(int i) {
  ExprNode n;
  n.op = ExprOp::Var;
  n.var = i;
  n.var_is_p = false;
  n.has_var = true;
  return Expression(make_node(std::move(n)));
}

Expression Expression::p(int i) {
  ExprNode n;
  n.op = ExprOp::Var;
  n.var = i;
  n.var_is_p = true;
  n.has_var = true;
  return Expression(make_node(std::move(n)));
}

Expression Expression::parameter(std::string name, double value) {
  ExprNode n;
  n.op = ExprOp::Param;
  n.param = std::move(name);
  n.param_value = value;
  return Expression(make_node(std::move(n)));
}

double Expression::eval(const PhasePoint& x) const {
  EvalCtx c{x.coords().data(), x.n(), x.dim()};
  return eval_node(node_.get(), c);
}

DualValue Expression::eval_dual(const PhasePoint& x) const {
  EvalCtx c{x.coords().data(), x.n(), x.dim()};
  const Dual d = eval_dual_node(node_.get(), c);
  DualValue out;
  out.value = d.v;
  out.gradient.assign(d.g.begin(), d.g.begin() + x.dim());
  return out;
}

void Expression::variables(std::set<int>& q_used, std::set<int>& p_used) const {
  collect_vars(node_.get(), q_used, p_used);
}

int Expression::max_var_index() const {
  std::set<int> qs, ps;
  variables(qs, ps);
  int m = -1;
  if (!qs.empty()) m = std::max(m, *qs.rbegin());
  if (!ps.empty()) m = std::max(m, *ps.rbegin());
  return m;
}

bool Expression::is_constant() const { return !node_->has_var; }

bool Expression::is_zero() const { return is_num(node_, 0.0); }

std::string Expression::str() const { return node_str(node_.get()); }

// Builders fold constants and drop units so that programmatically assembled
// trees (determinant expansions, linear combinations) stay small.

Expression operator+(const Expression& a, const Expression& b) {
  if (a.node()->op == ExprOp::Number && b.node()->op == ExprOp::Number)
    return Expression::number(a.node()->number + b.node()->number);
  if (is_num(a.node(), 0.0)) return b;
  if (is_num(b.node(), 0.0)) return a;
  return Expression(binary(ExprOp::Add, a.node(), b.node()));
}

Expression operator-(const Expression& a, const Expression& b) {
  if (a.node()->op == ExprOp::Number && b.node()->op == ExprOp::Number)
    return Expression::number(a.node()->number - b.node()->number);
  if (is_num(b.node(), 0.0)) return a;
  if (is_num(a.node(), 0.0)) return -b;
  return Expression(binary(ExprOp::Sub, a.node(), b.node()));
}

Expression operator*(const Expression& a, const Expression& b) {
  if (a.node()->op == ExprOp::Number && b.node()->op == ExprOp::Number)
    return Expression::number(a.node()->number * b.node()->number);
  if (is_num(a.node(), 0.0) || is_num(b.node(), 0.0)) return Expression::number(0.0);
  if (is_num(a.node(), 1.0)) return b;
  if (is_num(b.node(), 1.0)) return a;
  return Expression(binary(ExprOp::Mul, a.node(), b.node()));
}

Expression operator/(const Expression& a, const Expression& b) {
  if (is_num(b.node(), 1.0)) return a;
  if (a.node()->op == ExprOp::Number && b.node()->op == ExprOp::Number && b.node()->number != 0.0)
    return Expression::number(a.node()->number / b.node()->number);
  if (is_num(a.node(), 0.0) && !is_num(b.node(), 0.0)) return Expression::number(0.0);
  return Expression(binary(ExprOp::Div, a.node(), b.node()));
}

Expression operator-(const Expression& a) {
  if (a.node()->op == ExprOp::Number) return Expression::number(-a.node()->number);
  if (a.node()->op == ExprOp::Neg) return Expression(a.node()->a);
  return Expression(unary(ExprOp::Neg, a.node()));
}

Expression pow(const Expression& a, const Expression& b) {
  if (is_num(b.node(), 1.0)) return a;
  if (is_num(b.node(), 0.0)) return Expression::number(1.0);
  if (a.node()->op == ExprOp::Number && b.node()->op == ExprOp::Number) {
    const double v = std::pow(a.node()->number, b.node()->number);
    if (std::isfinite(v)) return Expression::number(v);
  }
  return Expression(binary(ExprOp::Pow, a.node(), b.node()));
}

Expression pow(const Expression& a, double k) { return pow(a, Expression::number(k)); }

Expression exp(const Expression& a) { return Expression(unary(ExprOp::Exp, a.node())); }
Expression log(const Expression& a) { return Expression(unary(ExprOp::Log, a.node())); }
Expression sin(const Expression& a) { return Expression(unary(ExprOp::Sin, a.node())); }
Expression cos(const Expression& a) { return Expression(unary(ExprOp::Cos, a.node())); }
Expression sqrt(const Expression& a) { return Expression(unary(ExprOp::Sqrt, a.node())); }

// ---------------------------------------------------------------------------
// parser
// ---------------------------------------------------------------------------

namespace {

struct Parser {
  std::string_view src;
  std::size_t pos = 0;
  int n;
  const std::map<std::string, double>* params;

  [[noreturn]] void fail(ParseError::Kind kind, const std::string& msg, std::size_t at) {
    throw ParseError(kind, msg + " at position " + std::to_string(at), at);
  }

  void skip_ws() {
    while (pos < src.size() && (src[pos] == ' ' || src[pos] == '\t')) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < src.size() && src[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }

  Expression parse() {
    Expression e = expr();
    skip_ws();
    if (pos != src.size())
      fail(ParseError::Kind::Syntax, "unexpected trailing input", pos);
    return e;
  }

  Expression expr() {
    Expression e = term();
    for (;;) {
      if (eat('+')) e = e + term();
      else if (eat('-')) e = e - term();
      else return e;
    }
  }

  Expression term() {
    Expression e = factor();
    for (;;) {
      if (eat('*')) e = e * factor();
      else if (eat('/')) e = e / factor();
      else return e;
    }
  }

  Expression factor() {
    Expression base = unary();
    if (eat('^')) return haantjes::pow(base, factor());  // right-associative
    return base;
  }

  Expression unary() {
    if (eat('-')) return -unary();
    return atom();
  }

  Expression atom() {
    skip_ws();
    if (pos >= src.size())
      fail(ParseError::Kind::Syntax, "unexpected end of input", pos);
    const char c = src[pos];
    if (c == '(') {
      ++pos;
      Expression e = expr();
      if (!eat(')')) fail(ParseError::Kind::Syntax, "expected ')'", pos);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail(ParseError::Kind::Syntax, std::string("unexpected character '") + c + "'", pos);
  }

  Expression number() {
    const std::size_t start = pos;
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
    if (pos < src.size() && src[pos] == '.') {
      ++pos;
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    if (pos == start || (pos == start + 1 && src[start] == '.'))
      fail(ParseError::Kind::Syntax, "malformed number", start);
    if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
      std::size_t mark = pos;
      ++pos;
      if (pos < src.size() && (src[pos] == '+' || src[pos] == '-')) ++pos;
      if (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
      } else {
        pos = mark;  // the 'e' belongs to something else
      }
    }
    double v = 0.0;
    const auto res = std::from_chars(src.data() + start, src.data() + pos, v);
    if (res.ec != std::errc())
      fail(ParseError::Kind::Syntax, "malformed number", start);
    return Expression::number(v);
  }

  Expression identifier() {
    const std::size_t start = pos;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
      ++pos;
    const std::string name(src.substr(start, pos - start));

    // coordinates: q<k> or p<k>, 1-based in the surface syntax
    if (name.size() >= 2 && (name[0] == 'q' || name[0] == 'p')) {
      bool digits = true;
      for (std::size_t i = 1; i < name.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) digits = false;
      if (digits) {
        const long idx = std::strtol(name.c_str() + 1, nullptr, 10);
        if (idx < 1 || idx > n)
          fail(ParseError::Kind::VariableOutOfRange,
               "variable '" + name + "' out of range for n = " + std::to_string(n), start);
        return name[0] == 'q' ? Expression::q(static_cast<int>(idx - 1))
                              : Expression::p(static_cast<int>(idx - 1));
      }
    }

    skip_ws();
    if (pos < src.size() && src[pos] == '(') {
      ++pos;
      Expression arg = expr();
      if (!eat(')')) fail(ParseError::Kind::Syntax, "expected ')'", pos);
      if (name == "exp") return haantjes::exp(arg);
      if (name == "log") return haantjes::log(arg);
      if (name == "sin") return haantjes::sin(arg);
      if (name == "cos") return haantjes::cos(arg);
      if (name == "sqrt") return haantjes::sqrt(arg);
      fail(ParseError::Kind::UnknownIdentifier, "unknown function '" + name + "'", start);
    }

    const auto it = params->find(name);
    if (it == params->end())
      fail(ParseError::Kind::UnknownIdentifier, "unknown identifier '" + name + "'", start);
    return Expression::parameter(name, it->second);
  }
};

}  // namespace

Expression parse_expression(std::string_view text, int n,
                            const std::map<std::string, double>& params) {
  if (n < 1 || n > kMaxDof)
    throw InvalidModel("number of degrees of freedom must be between 1 and " +
                       std::to_string(kMaxDof));
  Parser p{text, 0, n, &params};
  return p.parse();
}

}  // namespace haantjes
