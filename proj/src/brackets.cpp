#include "haantjes/brackets.hpp"

#include <cmath>

namespace haantjes {

Eigen::VectorXd lie_bracket(const VectorField& X, const VectorField& Y, const PhasePoint& x) {
  if (X.dim() != Y.dim()) throw InvalidModel("lie bracket of fields with different dimensions");
  Eigen::VectorXd xv, yv;
  Eigen::MatrixXd xj, yj;
  X.value_and_jacobian(x, xv, xj);
  Y.value_and_jacobian(x, yv, yj);
  return yj * xv - xj * yv;
}

BracketValue poisson_bracket(const Expression& F, const Expression& G, const PhasePoint& x) {
  const SymplecticForm w(x.n());
  const DualValue df = F.eval_dual(x);
  const DualValue dg = G.eval_dual(x);
  const Eigen::Map<const Eigen::VectorXd> f(df.gradient.data(), x.dim());
  const Eigen::Map<const Eigen::VectorXd> g(dg.gradient.data(), x.dim());
  BracketValue out;
  out.value = f.dot(w.poisson() * g);
  for (int k = 0; k < x.n(); ++k)
    out.scale += std::abs(f(k) * g(x.n() + k)) + std::abs(f(x.n() + k) * g(k));
  return out;
}

std::vector<double> separable_involution_terms(const Expression& F, const Expression& G,
                                               const PhasePoint& x) {
  const DualValue df = F.eval_dual(x);
  const DualValue dg = G.eval_dual(x);
  const int n = x.n();
  std::vector<double> terms(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    terms[static_cast<std::size_t>(k)] =
        df.gradient[k] * dg.gradient[n + k] - df.gradient[n + k] * dg.gradient[k];
  return terms;
}

Eigen::MatrixXd gradient_rows(const std::vector<Expression>& functions, const PhasePoint& x) {
  Eigen::MatrixXd rows(static_cast<int>(functions.size()), x.dim());
  for (std::size_t i = 0; i < functions.size(); ++i) {
    const DualValue d = functions[i].eval_dual(x);
    for (int a = 0; a < x.dim(); ++a) rows(static_cast<int>(i), a) = d.gradient[a];
  }
  return rows;
}

int covector_rank(const Eigen::MatrixXd& rows, double tol) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > tol * s(0)) ++rank;
  return rank;
}

int covector_rank(const std::vector<Expression>& functions, const PhasePoint& x, double tol) {
  return covector_rank(gradient_rows(functions, x), tol);
}

}  // namespace haantjes
