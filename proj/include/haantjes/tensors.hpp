// Nijenhuis torsion and Haantjes tensor of a (1,1) tensor field, evaluated
// pointwise from entry values and first derivatives.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "haantjes/fields.hpp"

namespace haantjes {

// Components c(i,j,k) of a (1,2) tensor, antisymmetric in (j,k) for the
// tensors produced here.
class Rank12Tensor {
 public:
  explicit Rank12Tensor(int dim)
      : dim_(dim), c_(static_cast<std::size_t>(dim) * dim * dim, 0.0) {}
  int dim() const { return dim_; }
  double operator()(int i, int j, int k) const { return c_[idx(i, j, k)]; }
  double& at(int i, int j, int k) { return c_[idx(i, j, k)]; }
  double max_abs() const;
  double max_antisymmetry_violation() const;  // max |c(i,j,k) + c(i,k,j)|
  // (i,j,k) component of the tensor applied to vectors u, v: c(i,j,k) u^j v^k
  Eigen::VectorXd apply(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;

 private:
  std::size_t idx(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * dim_ + j) * dim_ + k;
  }
  int dim_;
  std::vector<double> c_;
};

// T(i,j,k) = sum_a [ dL(i,k)/dx_a L(a,j) - dL(i,j)/dx_a L(a,k)
//                    + (dL(a,j)/dx_k - dL(a,k)/dx_j) L(i,a) ]
Rank12Tensor nijenhuis_torsion(const OperatorField& L, const PhasePoint& x);

// H(i,j,k) = sum_{a,b} [ L(i,a)L(a,b)T(b,j,k) + T(i,a,b)L(a,j)L(b,k)
//                        - L(i,a)(T(a,b,k)L(b,j) + T(a,j,b)L(b,k)) ]
Rank12Tensor haantjes_tensor(const OperatorField& L, const PhasePoint& x);

// Shared assembly step: Haantjes components from the operator value and a
// precomputed torsion; also the second route used by property tests.
Rank12Tensor haantjes_from_torsion(const Eigen::MatrixXd& V, const Rank12Tensor& T);

// Scale-free residual: max component magnitude over (1 + max |entry|)^3.
// Torsion is bilinear in L and dL and the Haantjes tensor adds two more
// factors of L, so this keeps thresholds meaningful for large operators.
double normalized_residual(const Rank12Tensor& tensor, const Eigen::MatrixXd& V);

struct ResidualSummary {
  double max_residual = 0.0;
  int samples = 0;
  bool pass(double tol) const { return samples > 0 && max_residual <= tol; }
};

ResidualSummary verify_haantjes_vanishing(const OperatorField& L,
                                          const std::vector<PhasePoint>& samples);

}  // namespace haantjes
