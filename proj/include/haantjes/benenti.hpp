// Killing tensors and torsion-free conformal structure on configuration
// space. Symmetric contravariant tensors are identified with fiberwise
// polynomial symbols A^ = A^{ij} p_i p_j; the Schouten bracket [A,B] is the
// full symmetric coefficient tensor of the canonical Poisson bracket of the
// symbols. A rank-2 tensor K is Killing for G exactly when [K,G] = 0.
#pragma once

#include <Eigen/Dense>

#include "haantjes/stackel.hpp"

namespace haantjes {

// Inverse-metric diagonal g^1(q), ..., g^n(q).
struct DiagonalMetric {
  std::vector<Expression> g;
  int n() const { return static_cast<int>(g.size()); }
};

// Symmetric contravariant 2-tensor with expression entries over q.
class SymTensor2 {
 public:
  SymTensor2(int dim, std::vector<Expression> entries);  // row-major, symmetric slots equal
  static SymTensor2 diagonal(const std::vector<Expression>& diag);
  int dim() const { return dim_; }
  const Expression& entry(int i, int j) const {
    return entries_[static_cast<std::size_t>(i) * dim_ + j];
  }
  Eigen::MatrixXd value(const PhasePoint& x) const;
  // symbol A^{ij} p_i p_j as a phase-space expression
  Expression symbol() const;

 private:
  int dim_;
  std::vector<Expression> entries_;
};

// Fully symmetric rank-3 component array.
class Rank3Symmetric {
 public:
  explicit Rank3Symmetric(int dim)
      : dim_(dim), c_(static_cast<std::size_t>(dim) * dim * dim, 0.0) {}
  int dim() const { return dim_; }
  double operator()(int i, int j, int k) const { return c_[idx(i, j, k)]; }
  double& at(int i, int j, int k) { return c_[idx(i, j, k)]; }
  double max_abs() const;

 private:
  std::size_t idx(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * dim_ + j) * dim_ + k;
  }
  int dim_;
  std::vector<double> c_;
};

// [A,B]^{ijk} at x: symmetrized coefficients of {A^, B^}. The cubic symbol of
// the bracket is sum_a [2 dA^{ij}/dq_a B^{ak} - 2 A^{ai} dB^{jk}/dq_a] before
// symmetrization.
Rank3Symmetric schouten_bracket(const SymTensor2& A, const SymTensor2& B, const PhasePoint& x);

// Scale-normalized max component of [K, G] at x; zero means K is Killing.
double killing_residual(const SymTensor2& K, const SymTensor2& G, const PhasePoint& x);

// Natural Hamiltonian attached to a Stackel matrix and potentials W_k(q_k):
// inverse-metric diagonal g^j = adj(S)_{1j}/det S, potential V = sum g^j W_j,
// H = 1/2 sum g^j p_j^2 + V (which is the first chain member).
struct ClassicalSystem {
  DiagonalMetric metric;
  Expression potential;
  Expression hamiltonian;
};
ClassicalSystem classical_metric(const StackelMatrix& S, const std::vector<Expression>& W);

// Diagonal Killing 2-tensors of the chain: K_j^{rr} = adj(S)_{jr}/det S.
std::vector<SymTensor2> stackel_killing_tensors(const StackelMatrix& S);

// Operator tower over a configuration-space operator L with minimal
// polynomial coefficients c_k(q):
//   Ktilde_0 = I, Ktilde_a = L^a - sum_{j=1}^{a} c_j L^{a-j},
// by the recurrence Ktilde_a = L Ktilde_{a-1} - c_a I (numeric route).
std::vector<Eigen::MatrixXd> benenti_tower_values(const OperatorField& L, const PhasePoint& x);

// Same tower as diagonal expression operators e_{a+1}(L) = diag(dc_{a+1}/dl_r)
// for L = diag(lambda_r); independent of the recursion route.
std::vector<OperatorField> benenti_tower_diagonal(const std::vector<Expression>& lambda);

// Torsion-free condition for a conformal Killing operator L against G:
// residual of [L#, G] - 2 X o G with L#^{ij} = L^i_a g^{aj}, X = G d(tr L),
// and o the symmetrized outer product. The sign is pinned by the symbol
// convention above (see the pinned-orientation test).
double l_tensor_residual(const OperatorField& L, const DiagonalMetric& G, const PhasePoint& x);

// Raised form of a diagonal mixed tensor against a diagonal inverse metric.
SymTensor2 raise_diagonal(const OperatorField& K, const DiagonalMetric& G);

}  // namespace haantjes
