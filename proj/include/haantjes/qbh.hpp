// Quasi-bi-Hamiltonian separable chains generated by a diagonal Nijenhuis
// operator N = diag(lambda_1(q_1), ..., lambda_n(q_n)) acting on both blocks.
// The chain Hamiltonians take the closed form
//   H_k = sum_i (dc_k/dl_i) f_i / prod_{j != i} (l_i - l_j),
// with c_k the minimal-polynomial coefficients of N, and the operator family
// is K_{k-1} = diag(dc_k/dl_r), which coincides with the control basis e_k(N).
#pragma once

#include <Eigen/Dense>

#include "haantjes/stackel.hpp"

namespace haantjes {

// sigma_1..sigma_n of the inputs (expression and value forms).
std::vector<Expression> elementary_symmetric(const std::vector<Expression>& xs);
Eigen::VectorXd elementary_symmetric(const Eigen::VectorXd& xs);

// dc_k/dl_r = (-1)^{k+1} sigma_{k-1}(l with slot r removed), as expressions.
Expression char_coefficient_partial(const std::vector<Expression>& lambda, int k, int r);

// Reverse Vandermonde, rows [l_i^{n-1}, ..., l_i, 1], and its closed-form
// inverse (V^{-1})(k,j) = (dc_k/dl_j) / prod_{r != j} (l_j - l_r).
Eigen::MatrixXd reverse_vandermonde(const Eigen::VectorXd& lambda);
Eigen::MatrixXd reverse_vandermonde_inverse(const Eigen::VectorXd& lambda);

class QbhSystem {
 public:
  // lambda_r may depend on q_r only; f_r on (q_r, p_r) only.
  QbhSystem(std::vector<Expression> lambda, std::vector<Expression> f);
  int n() const { return n_; }
  const std::vector<Expression>& lambda() const { return lambda_; }
  const std::vector<Expression>& functions() const { return f_; }

  // The same chain as a Stackel system with S = reverse Vandermonde in the
  // lambda_r. Symbolic route, available for n <= 6.
  StackelSystem build_stackel() const;

  // Closed-form chain members H_1..H_n (small trees, any supported n).
  const std::vector<Expression>& hamiltonians() const { return h_; }
  const std::vector<OperatorField>& operators() const { return ops_; }  // K_0 = I first
  const OperatorField& generator() const { return N_; }                 // the Nijenhuis operator

  HaantjesStructure structure() const { return HaantjesStructure(n_, ops_); }
  ChainSpec chain() const { return ChainSpec{h_}; }

  // max_j |K_{j-1}(x) - e_j(N(x))| over the family: the control-basis form
  // of the operators, checked from the recurrence e_{j+1} = N e_j - c_j I.
  double control_identity_residual(const PhasePoint& x) const;

 private:
  int n_;
  std::vector<Expression> lambda_, f_, h_;
  std::vector<OperatorField> ops_;
  OperatorField N_;
};

// Rational Ruijsenaars-Schneider ("goldfish") family:
//   H = sum_i (e^{a p_i} / prod_{j != i}(q_i - q_j) + b q_i).
struct GoldfishModel {
  int n = 3;
  double a = 1.0;
  double b = 0.0;
};

QbhSystem goldfish_system(const GoldfishModel& m);  // lambda_i = q_i, f_i = e^{a p_i} + b q_i^n
Expression goldfish_hamiltonian_expression(const GoldfishModel& m);
double goldfish_hamiltonian(const GoldfishModel& m, const PhasePoint& x);

// |sum_i q_i^n / prod_{j != i}(q_i - q_j) - sum_i q_i| over the largest term.
double jacobi_identity_residual(const Eigen::VectorXd& q);

// Second Newton-type form of the goldfish flow:
//   qdd_k = 2 sum_{i != k} qd_k qd_i / (q_k - q_i) - a b qd_k.
// Velocities from the Hamiltonian flow; accelerations from central finite
// differences (step h) of the exact gradient field.
Eigen::VectorXd goldfish_newton_residual(const GoldfishModel& m, const PhasePoint& x,
                                         double h = 1e-5);

}  // namespace haantjes
