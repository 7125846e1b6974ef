// Separable systems built from a Stackel matrix S(q) whose row i depends on
// q_i alone, together with one function f_k(q_k, p_k) per coordinate. The
// associated Hamiltonians are H_j = sum_k (adj(S)_{jk}/det S) f_k and the
// operator family K_{j-1} is diagonal with entries adj(S)_{jr}/adj(S)_{1r}
// repeated on the position and momentum slots.
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "haantjes/fields.hpp"
#include "haantjes/structure.hpp"

namespace haantjes {

// Determinant and adjugate as expression trees (permutation expansion).
// Practical up to 6x6; larger sizes are rejected.
Expression determinant_expression(const std::vector<Expression>& entries, int n);
Expression adjugate_entry_expression(const std::vector<Expression>& entries, int n, int j, int k);

class StackelMatrix {
 public:
  StackelMatrix(int n, std::vector<Expression> entries);  // row-major, n*n
  int n() const { return n_; }
  const Expression& entry(int i, int j) const {
    return entries_[static_cast<std::size_t>(i) * n_ + j];
  }

  Eigen::MatrixXd value(const Eigen::VectorXd& q) const;

  struct Cofactors {
    Eigen::MatrixXd adj;  // adj(j,k) * S(k,i) = det * delta(j,i)
    double det = 0.0;
  };
  // Throws InvalidModel (carrying the determinant value) when S is singular.
  Cofactors cofactors(const Eigen::VectorXd& q) const;

  Expression det_expression() const;
  Expression adjugate_expression(int j, int k) const;

 private:
  int n_;
  std::vector<Expression> entries_;
};

// H_j expression trees for an arbitrary per-coordinate family f_k.
std::vector<Expression> stackel_chain_expressions(const StackelMatrix& S,
                                                  const std::vector<Expression>& f);

class StackelSystem {
 public:
  StackelSystem(StackelMatrix S, std::vector<Expression> f);  // f_k in (q_k, p_k) only
  int n() const { return S_.n(); }
  const StackelMatrix& matrix() const { return S_; }
  const std::vector<Expression>& functions() const { return f_; }

  std::vector<double> hamiltonians(const PhasePoint& x) const;  // numeric route
  const std::vector<Expression>& hamiltonian_expressions() const { return h_; }
  const std::vector<OperatorField>& operators() const { return ops_; }  // K_0 = I first
  HaantjesStructure structure() const { return HaantjesStructure(n(), ops_); }
  ChainSpec chain() const { return ChainSpec{h_}; }

 private:
  StackelMatrix S_;
  std::vector<Expression> f_;
  std::vector<Expression> h_;
  std::vector<OperatorField> ops_;
};

// Diagonal generator L = sum_r lambda_r (d/dq_r ox dq_r + d/dp_r ox dp_r).
struct GeneratorSpec {
  std::vector<Expression> lambda;  // q-dependent eigenvalue functions
};

OperatorField generator_field(const GeneratorSpec& gen, int n);

// Lagrange interpolation projectors pi_r = prod_{i != r} (K - l_i I)/(l_r - l_i)
// evaluated from the operator value; they reproduce the coordinate-plane
// projectors of the eigenframe. Throws on eigenvalue collision within
// `collision_tol` relative gap.
std::vector<Eigen::MatrixXd> interpolation_projectors(const GeneratorSpec& gen,
                                                      const PhasePoint& x,
                                                      double collision_tol = 1e-8);

struct BasisCoefficients {
  Eigen::VectorXd lambda;          // generator eigenvalues at x
  Eigen::VectorXd c;               // minimal-polynomial coefficients c_1..c_n
  Eigen::MatrixXd cyclic;          // column j: coefficients of K_j in I, K, ..., K^{n-1}
  std::vector<Eigen::MatrixXd> control;  // e_1(K) = I, e_2(K) = K - c_1 I, ...
  Eigen::MatrixXd vandermonde;     // rows [1, l_r, l_r^2, ...]
  Eigen::MatrixXd transition;      // upper triangular, column j holds -c_{j-i}
  double vandermonde_condition = 0.0;
  double max_cyclic_residual = 0.0;   // reconstruction against K_j values
  double max_control_residual = 0.0;  // e_{j+1}(K) against K_j values
  double partition_residual = 0.0;    // sum pi_r - I and orthogonality
  double eigen_transition_residual = 0.0;  // (V * H_R)(r,j) vs e_j eigenvalues
};

// Expands the operator family of `sys` in the cyclic and control bases of the
// generator at x, and checks the reconstructions.
BasisCoefficients basis_coefficients(const StackelSystem& sys, const GeneratorSpec& gen,
                                     const PhasePoint& x, double collision_tol = 1e-8);

// Fiber projection of a block-triangular operator [[A, 0], [B, A]] on T*Q.
// Requires the upper-right block to vanish and A to be independent of the
// momenta (both verified on the samples); returns A as an operator on Q.
OperatorField project_to_configuration(const OperatorField& K,
                                       const std::vector<PhasePoint>& samples,
                                       double tol = 1e-10);

// Kinetic/potential splitting: T_j from psi_k(p_k), V_j from W_k(q_k).
struct PotentialChain {
  std::vector<Expression> kinetic;    // T_j
  std::vector<Expression> potential;  // V_j
};
PotentialChain potential_chain(const StackelMatrix& S, const std::vector<Expression>& psi,
                               const std::vector<Expression>& W);

}  // namespace haantjes
