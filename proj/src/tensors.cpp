#include "haantjes/tensors.hpp"

#include <cmath>

namespace haantjes {

double Rank12Tensor::max_abs() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

double Rank12Tensor::max_antisymmetry_violation() const {
  double m = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      for (int k = j; k < dim_; ++k)
        m = std::max(m, std::abs((*this)(i, j, k) + (*this)(i, k, j)));
  return m;
}

Eigen::VectorXd Rank12Tensor::apply(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim_);
  for (int i = 0; i < dim_; ++i) {
    double s = 0.0;
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k) s += (*this)(i, j, k) * u(j) * v(k);
    out(i) = s;
  }
  return out;
}

Rank12Tensor nijenhuis_torsion(const OperatorField& L, const PhasePoint& x) {
  const int m = L.dim();
  Eigen::MatrixXd V;
  std::vector<Eigen::MatrixXd> D;  // D[a](i,j) = dL(i,j)/dx_a
  L.value_and_derivatives(x, V, D);

  Rank12Tensor T(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = j + 1; k < m; ++k) {
        double s = 0.0;
        for (int a = 0; a < m; ++a) {
          s += D[static_cast<std::size_t>(a)](i, k) * V(a, j) -
               D[static_cast<std::size_t>(a)](i, j) * V(a, k) +
               (D[static_cast<std::size_t>(k)](a, j) - D[static_cast<std::size_t>(j)](a, k)) *
                   V(i, a);
        }
        T.at(i, j, k) = s;
        T.at(i, k, j) = -s;
      }
  return T;
}

Rank12Tensor haantjes_from_torsion(const Eigen::MatrixXd& V, const Rank12Tensor& T) {
  const int m = static_cast<int>(V.rows());
  const Eigen::MatrixXd V2 = V * V;

  // contract stepwise: TL(i,j,k) = sum_b T(i,j,b) V(b,k), etc.
  Rank12Tensor H(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = j + 1; k < m; ++k) {
        double t1 = 0.0;  // V2(i,b) T(b,j,k)
        for (int b = 0; b < m; ++b) t1 += V2(i, b) * T(b, j, k);
        double t2 = 0.0;  // T(i,a,b) V(a,j) V(b,k)
        for (int a = 0; a < m; ++a) {
          double inner = 0.0;
          for (int b = 0; b < m; ++b) inner += T(i, a, b) * V(b, k);
          t2 += inner * V(a, j);
        }
        double t3 = 0.0;  // V(i,a) [ T(a,b,k) V(b,j) + T(a,j,b) V(b,k) ]
        for (int a = 0; a < m; ++a) {
          double inner = 0.0;
          for (int b = 0; b < m; ++b) inner += T(a, b, k) * V(b, j) + T(a, j, b) * V(b, k);
          t3 += V(i, a) * inner;
        }
        const double s = t1 + t2 - t3;
        H.at(i, j, k) = s;
        H.at(i, k, j) = -s;
      }
  return H;
}

Rank12Tensor haantjes_tensor(const OperatorField& L, const PhasePoint& x) {
  Eigen::MatrixXd V;
  std::vector<Eigen::MatrixXd> D;
  L.value_and_derivatives(x, V, D);

  const int m = L.dim();
  Rank12Tensor T(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = j + 1; k < m; ++k) {
        double s = 0.0;
        for (int a = 0; a < m; ++a)
          s += D[static_cast<std::size_t>(a)](i, k) * V(a, j) -
               D[static_cast<std::size_t>(a)](i, j) * V(a, k) +
               (D[static_cast<std::size_t>(k)](a, j) - D[static_cast<std::size_t>(j)](a, k)) *
                   V(i, a);
        T.at(i, j, k) = s;
        T.at(i, k, j) = -s;
      }
  return haantjes_from_torsion(V, T);
}

double normalized_residual(const Rank12Tensor& tensor, const Eigen::MatrixXd& V) {
  const double scale = 1.0 + V.cwiseAbs().maxCoeff();
  return tensor.max_abs() / (scale * scale * scale);
}

ResidualSummary verify_haantjes_vanishing(const OperatorField& L,
                                          const std::vector<PhasePoint>& samples) {
  ResidualSummary out;
  for (const auto& x : samples) {
    const Eigen::MatrixXd V = L.value(x);
    const Rank12Tensor H = haantjes_tensor(L, x);
    out.max_residual = std::max(out.max_residual, normalized_residual(H, V));
    ++out.samples;
  }
  return out;
}

}  // namespace haantjes
