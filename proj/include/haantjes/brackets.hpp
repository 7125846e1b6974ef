// Brackets and rank diagnostics on sampled points.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "haantjes/fields.hpp"

namespace haantjes {

// Commutator of vector fields, [X,Y]^i = X^a d_a Y^i - Y^a d_a X^i.
Eigen::VectorXd lie_bracket(const VectorField& X, const VectorField& Y, const PhasePoint& x);

// Canonical Poisson bracket <dF, P dG> together with the cancellation scale
// sum_k |F_q G_p| + |F_p G_q| used to normalize involution residuals.
struct BracketValue {
  double value = 0.0;
  double scale = 0.0;
  double normalized() const { return std::abs(value) / std::max(1.0, scale); }
};
BracketValue poisson_bracket(const Expression& F, const Expression& G, const PhasePoint& x);

// Per-coordinate terms dF/dq_k dG/dp_k - dF/dp_k dG/dq_k; their sum is {F,G}.
std::vector<double> separable_involution_terms(const Expression& F, const Expression& G,
                                               const PhasePoint& x);

// Number of singular values above tol * sigma_max of the stacked gradient rows.
int covector_rank(const Eigen::MatrixXd& rows, double tol);
int covector_rank(const std::vector<Expression>& functions, const PhasePoint& x, double tol);

// Stacked gradient rows of a family of functions at x (row i = dF_i).
Eigen::MatrixXd gradient_rows(const std::vector<Expression>& functions, const PhasePoint& x);

}  // namespace haantjes
