// Expression-valued tensor fields on phase space or on configuration space.
//
// A field of dimension m is evaluated at a PhasePoint with n degrees of
// freedom where m == n (configuration space, entries in q only) or m == 2n
// (full phase space). Coordinate partials are taken with respect to the first
// m gradient slots, which is correct in both cases because the q block leads.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "haantjes/expression.hpp"
#include "haantjes/point.hpp"

namespace haantjes {

class OperatorField {
 public:
  OperatorField(int dim, std::vector<Expression> entries);  // row-major, dim*dim
  static OperatorField identity(int dim);

  int dim() const { return dim_; }
  const Expression& entry(int i, int j) const {
    return entries_[static_cast<std::size_t>(i) * dim_ + j];
  }

  Eigen::MatrixXd value(const PhasePoint& x) const;
  // V(i,j) = entry value, D[a](i,j) = d entry(i,j) / d x_a for a < dim
  void value_and_derivatives(const PhasePoint& x, Eigen::MatrixXd& V,
                             std::vector<Eigen::MatrixXd>& D) const;

  // Entry-wise linear combination sum_k coeffs[k] * parts[k].
  static OperatorField linear_combination(const std::vector<Expression>& coeffs,
                                          const std::vector<OperatorField>& parts);

 private:
  void check_point(const PhasePoint& x) const;
  int dim_;
  std::vector<Expression> entries_;
};

// A list of m expression components; doubles as vector or covector field.
class ComponentField {
 public:
  explicit ComponentField(std::vector<Expression> comps);
  int dim() const { return static_cast<int>(comps_.size()); }
  const Expression& comp(int i) const { return comps_[static_cast<std::size_t>(i)]; }

  Eigen::VectorXd value(const PhasePoint& x) const;
  // v(i) = component value, J(i,a) = d comp_i / d x_a for a < dim
  void value_and_jacobian(const PhasePoint& x, Eigen::VectorXd& v, Eigen::MatrixXd& J) const;

 private:
  std::vector<Expression> comps_;
};

using VectorField = ComponentField;
using CovectorField = ComponentField;

// Canonical symplectic structure on T*Q in (q; p) block order:
//   omega = [[0, -I], [I, 0]],   P = omega^{-1} = [[0, I], [-I, 0]].
// With these blocks {F,G} = <dF, P dG> is the canonical bracket
// sum_k (dF/dq_k dG/dp_k - dF/dp_k dG/dq_k).
class SymplecticForm {
 public:
  explicit SymplecticForm(int n);
  int n() const { return n_; }
  int dim() const { return 2 * n_; }
  const Eigen::MatrixXd& omega() const { return omega_; }
  const Eigen::MatrixXd& poisson() const { return poisson_; }

 private:
  int n_;
  Eigen::MatrixXd omega_, poisson_;
};

}  // namespace haantjes
