// Phase-space points and the error taxonomy shared across the library.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace haantjes {

// Largest supported number of degrees of freedom. Forward-mode gradients are
// carried in fixed-width registers of 2*kMaxDof slots.
inline constexpr int kMaxDof = 8;

class ParseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, UnknownIdentifier, VariableOutOfRange };
  ParseError(Kind k, const std::string& msg, std::size_t pos)
      : std::runtime_error(msg), kind(k), position(pos) {}
  Kind kind;
  std::size_t position;  // byte offset into the source text
};

// Evaluation left the domain of a subexpression (division by zero, log of a
// non-positive value, non-finite result, ...).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// A structural precondition failed: dimension mismatch, locality violation,
// singular matrix where a regular one is required, unsupported size.
class InvalidModel : public std::runtime_error {
 public:
  explicit InvalidModel(const std::string& msg) : std::runtime_error(msg) {}
};

// Point of T*Q with canonical coordinates (q_1..q_n, p_1..p_n), q block first.
class PhasePoint {
 public:
  explicit PhasePoint(int n) : n_(check(n)), c_(2 * n, 0.0) {}
  PhasePoint(std::vector<double> q, std::vector<double> p) : n_(check(static_cast<int>(q.size()))) {
    if (p.size() != q.size()) throw InvalidModel("phase point needs as many momenta as positions");
    c_ = std::move(q);
    c_.insert(c_.end(), p.begin(), p.end());
  }

  int n() const { return n_; }
  int dim() const { return 2 * n_; }
  double coord(int a) const { return c_[static_cast<std::size_t>(a)]; }
  double& coord(int a) { return c_[static_cast<std::size_t>(a)]; }
  double q(int i) const { return c_[static_cast<std::size_t>(i)]; }
  double p(int i) const { return c_[static_cast<std::size_t>(n_ + i)]; }
  double& q(int i) { return c_[static_cast<std::size_t>(i)]; }
  double& p(int i) { return c_[static_cast<std::size_t>(n_ + i)]; }
  const std::vector<double>& coords() const { return c_; }

 private:
  static int check(int n) {
    if (n < 1 || n > kMaxDof)
      throw InvalidModel("number of degrees of freedom must be between 1 and " +
                         std::to_string(kMaxDof));
    return n;
  }
  int n_;
  std::vector<double> c_;
};

// Value together with the full gradient over (q_1..q_n, p_1..p_n).
struct DualValue {
  double value = 0.0;
  std::vector<double> gradient;  // size 2n, q block first
};

}  // namespace haantjes
