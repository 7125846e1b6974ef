#include "haantjes/fields.hpp"

namespace haantjes {

OperatorField::OperatorField(int dim, std::vector<Expression> entries)
    : dim_(dim), entries_(std::move(entries)) {
  if (dim_ < 1) throw InvalidModel("operator dimension must be positive");
  if (entries_.size() != static_cast<std::size_t>(dim_) * dim_)
    throw InvalidModel("operator field needs dim*dim entries");
}

OperatorField OperatorField::identity(int dim) {
  std::vector<Expression> e;
  e.reserve(static_cast<std::size_t>(dim) * dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) e.push_back(Expression::number(i == j ? 1.0 : 0.0));
  return OperatorField(dim, std::move(e));
}

void OperatorField::check_point(const PhasePoint& x) const {
  if (dim_ != x.n() && dim_ != x.dim())
    throw InvalidModel("operator of dimension " + std::to_string(dim_) +
                       " evaluated at a point with n = " + std::to_string(x.n()));
}

Eigen::MatrixXd OperatorField::value(const PhasePoint& x) const {
  check_point(x);
  Eigen::MatrixXd V(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) V(i, j) = entry(i, j).eval(x);
  return V;
}

void OperatorField::value_and_derivatives(const PhasePoint& x, Eigen::MatrixXd& V,
                                          std::vector<Eigen::MatrixXd>& D) const {
  check_point(x);
  V.resize(dim_, dim_);
  D.assign(static_cast<std::size_t>(dim_), Eigen::MatrixXd(dim_, dim_));
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) {
      const DualValue d = entry(i, j).eval_dual(x);
      V(i, j) = d.value;
      for (int a = 0; a < dim_; ++a) D[static_cast<std::size_t>(a)](i, j) = d.gradient[a];
    }
}

OperatorField OperatorField::linear_combination(const std::vector<Expression>& coeffs,
                                                const std::vector<OperatorField>& parts) {
  if (coeffs.empty() || coeffs.size() != parts.size())
    throw InvalidModel("linear combination needs one coefficient per operator");
  const int dim = parts.front().dim();
  std::vector<Expression> e(static_cast<std::size_t>(dim) * dim, Expression::number(0.0));
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (parts[k].dim() != dim) throw InvalidModel("mixed dimensions in linear combination");
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        auto& slot = e[static_cast<std::size_t>(i) * dim + j];
        slot = slot + coeffs[k] * parts[k].entry(i, j);
      }
  }
  return OperatorField(dim, std::move(e));
}

ComponentField::ComponentField(std::vector<Expression> comps) : comps_(std::move(comps)) {
  if (comps_.empty()) throw InvalidModel("component field needs at least one component");
}

Eigen::VectorXd ComponentField::value(const PhasePoint& x) const {
  Eigen::VectorXd v(dim());
  for (int i = 0; i < dim(); ++i) v(i) = comps_[static_cast<std::size_t>(i)].eval(x);
  return v;
}

void ComponentField::value_and_jacobian(const PhasePoint& x, Eigen::VectorXd& v,
                                        Eigen::MatrixXd& J) const {
  const int m = dim();
  if (m != x.n() && m != x.dim())
    throw InvalidModel("field of dimension " + std::to_string(m) +
                       " evaluated at a point with n = " + std::to_string(x.n()));
  v.resize(m);
  J.resize(m, m);
  for (int i = 0; i < m; ++i) {
    const DualValue d = comps_[static_cast<std::size_t>(i)].eval_dual(x);
    v(i) = d.value;
    for (int a = 0; a < m; ++a) J(i, a) = d.gradient[a];
  }
}

SymplecticForm::SymplecticForm(int n) : n_(n) {
  if (n < 1 || n > kMaxDof) throw InvalidModel("unsupported symplectic dimension");
  const int m = 2 * n;
  omega_ = Eigen::MatrixXd::Zero(m, m);
  poisson_ = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < n; ++i) {
    omega_(i, n + i) = -1.0;
    omega_(n + i, i) = 1.0;
    poisson_(i, n + i) = 1.0;
    poisson_(n + i, i) = -1.0;
  }
}

}  // namespace haantjes
