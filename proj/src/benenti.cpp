#include "haantjes/benenti.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "haantjes/qbh.hpp"

namespace haantjes {

SymTensor2::SymTensor2(int dim, std::vector<Expression> entries)
    : dim_(dim), entries_(std::move(entries)) {
  if (dim_ < 1) throw InvalidModel("tensor dimension must be positive");
  if (entries_.size() != static_cast<std::size_t>(dim_) * dim_)
    throw InvalidModel("symmetric tensor needs dim*dim entries");
  for (const auto& e : entries_) {
    std::set<int> qs, ps;
    e.variables(qs, ps);
    if (!ps.empty())
      throw InvalidModel("symmetric contravariant tensors live on configuration space: '" +
                         e.str() + "' depends on momenta");
  }
}

SymTensor2 SymTensor2::diagonal(const std::vector<Expression>& diag) {
  const int n = static_cast<int>(diag.size());
  std::vector<Expression> e(static_cast<std::size_t>(n) * n, Expression::number(0.0));
  for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i) * n + i] = diag[static_cast<std::size_t>(i)];
  return SymTensor2(n, std::move(e));
}

Eigen::MatrixXd SymTensor2::value(const PhasePoint& x) const {
  Eigen::MatrixXd V(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) V(i, j) = entry(i, j).eval(x);
  return V;
}

Expression SymTensor2::symbol() const {
  Expression s = Expression::number(0.0);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) s = s + entry(i, j) * Expression::p(i) * Expression::p(j);
  return s;
}

double Rank3Symmetric::max_abs() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

namespace {

// entry values and q-derivatives of a configuration tensor at x
void values_and_q_derivatives(const SymTensor2& A, const PhasePoint& x, Eigen::MatrixXd& V,
                              std::vector<Eigen::MatrixXd>& D) {
  const int n = A.dim();
  V.resize(n, n);
  D.assign(static_cast<std::size_t>(n), Eigen::MatrixXd(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const DualValue d = A.entry(i, j).eval_dual(x);
      V(i, j) = d.value;
      for (int a = 0; a < n; ++a) D[static_cast<std::size_t>(a)](i, j) = d.gradient[a];
    }
}

Rank3Symmetric symmetrize3(const Rank3Symmetric& raw) {
  const int n = raw.dim();
  Rank3Symmetric out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        out.at(i, j, k) = (raw(i, j, k) + raw(i, k, j) + raw(j, i, k) + raw(j, k, i) +
                           raw(k, i, j) + raw(k, j, i)) /
                          6.0;
  return out;
}

}  // namespace

Rank3Symmetric schouten_bracket(const SymTensor2& A, const SymTensor2& B, const PhasePoint& x) {
  if (A.dim() != B.dim()) throw InvalidModel("bracket of tensors with different dimensions");
  const int n = A.dim();
  if (n != x.n()) throw InvalidModel("tensor dimension does not match the point");
  Eigen::MatrixXd Av, Bv;
  std::vector<Eigen::MatrixXd> Ad, Bd;
  values_and_q_derivatives(A, x, Av, Ad);
  values_and_q_derivatives(B, x, Bv, Bd);

  // {A^, B^} = sum_a [dA^{ij}/dq_a p_i p_j * 2 B^{ak} p_k
  //                   - 2 A^{ai} p_i * dB^{jk}/dq_a p_j p_k]
  Rank3Symmetric raw(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int a = 0; a < n; ++a)
          s += 2.0 * Ad[static_cast<std::size_t>(a)](i, j) * Bv(a, k) -
               2.0 * Av(a, i) * Bd[static_cast<std::size_t>(a)](j, k);
        raw.at(i, j, k) = s;
      }
  return symmetrize3(raw);
}

double killing_residual(const SymTensor2& K, const SymTensor2& G, const PhasePoint& x) {
  const Rank3Symmetric br = schouten_bracket(K, G, x);
  Eigen::MatrixXd Kv, Gv;
  std::vector<Eigen::MatrixXd> Kd, Gd;
  values_and_q_derivatives(K, x, Kv, Kd);
  values_and_q_derivatives(G, x, Gv, Gd);
  double dmax = 1.0;
  for (int a = 0; a < K.dim(); ++a) {
    dmax = std::max(dmax, Kd[static_cast<std::size_t>(a)].cwiseAbs().maxCoeff());
    dmax = std::max(dmax, Gd[static_cast<std::size_t>(a)].cwiseAbs().maxCoeff());
  }
  const double scale =
      (1.0 + Kv.cwiseAbs().maxCoeff()) * (1.0 + Gv.cwiseAbs().maxCoeff()) * dmax;
  return br.max_abs() / scale;
}

ClassicalSystem classical_metric(const StackelMatrix& S, const std::vector<Expression>& W) {
  const int n = S.n();
  if (static_cast<int>(W.size()) != n) throw InvalidModel("need one potential per coordinate");
  const Expression det = S.det_expression();
  ClassicalSystem out;
  out.metric.g.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) out.metric.g.push_back(S.adjugate_expression(0, j) / det);
  Expression V = Expression::number(0.0);
  Expression T = Expression::number(0.0);
  for (int j = 0; j < n; ++j) {
    V = V + out.metric.g[static_cast<std::size_t>(j)] * W[static_cast<std::size_t>(j)];
    T = T + Expression::number(0.5) * out.metric.g[static_cast<std::size_t>(j)] *
                Expression::p(j) * Expression::p(j);
  }
  out.potential = V;
  out.hamiltonian = T + V;
  return out;
}

std::vector<SymTensor2> stackel_killing_tensors(const StackelMatrix& S) {
  const int n = S.n();
  const Expression det = S.det_expression();
  std::vector<SymTensor2> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    std::vector<Expression> diag;
    diag.reserve(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) diag.push_back(S.adjugate_expression(j, r) / det);
    out.push_back(SymTensor2::diagonal(diag));
  }
  return out;
}

std::vector<Eigen::MatrixXd> benenti_tower_values(const OperatorField& L, const PhasePoint& x) {
  const int n = L.dim();
  const Eigen::MatrixXd Lv = L.value(x);
  const Eigen::EigenSolver<Eigen::MatrixXd> solver(Lv);
  Eigen::VectorXd lambda(n);
  for (int i = 0; i < n; ++i) lambda(i) = solver.eigenvalues()(i).real();
  const Eigen::VectorXd sigma = elementary_symmetric(lambda);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  std::vector<Eigen::MatrixXd> tower{I};
  for (int a = 1; a < n; ++a) {
    const double ca = (a % 2 == 1 ? 1.0 : -1.0) * sigma(a - 1);  // c_a
    tower.push_back(Lv * tower.back() - ca * I);
  }
  return tower;
}

std::vector<OperatorField> benenti_tower_diagonal(const std::vector<Expression>& lambda) {
  const int n = static_cast<int>(lambda.size());
  std::vector<OperatorField> out;
  out.push_back(OperatorField::identity(n));
  for (int a = 1; a < n; ++a) {
    std::vector<Expression> e(static_cast<std::size_t>(n) * n, Expression::number(0.0));
    for (int r = 0; r < n; ++r)
      e[static_cast<std::size_t>(r) * n + r] = char_coefficient_partial(lambda, a + 1, r);
    out.emplace_back(n, std::move(e));
  }
  return out;
}

double l_tensor_residual(const OperatorField& L, const DiagonalMetric& G, const PhasePoint& x) {
  const int n = L.dim();
  if (G.n() != n) throw InvalidModel("metric dimension does not match the operator");

  // raised operator L#^{ij} = 1/2 (L^i_a g^{aj} + L^j_a g^{ai})
  std::vector<Expression> raised(static_cast<std::size_t>(n) * n, Expression::number(0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      raised[static_cast<std::size_t>(i) * n + j] =
          Expression::number(0.5) * (L.entry(i, j) * G.g[static_cast<std::size_t>(j)] +
                                     L.entry(j, i) * G.g[static_cast<std::size_t>(i)]);
  const SymTensor2 Lsharp(n, std::move(raised));
  const SymTensor2 Gt = SymTensor2::diagonal(G.g);

  const Rank3Symmetric br = schouten_bracket(Lsharp, Gt, x);

  // X = G d(tr L): X^i = g^i d(tr L)/dq_i
  Expression tr = Expression::number(0.0);
  for (int i = 0; i < n; ++i) tr = tr + L.entry(i, i);
  const DualValue dtr = tr.eval_dual(x);
  const Eigen::MatrixXd Gv = Gt.value(x);
  Eigen::VectorXd X(n);
  for (int i = 0; i < n; ++i) X(i) = Gv(i, i) * dtr.gradient[i];

  // symmetrized outer product (X o G)^{ijk}
  Rank3Symmetric expected(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        expected.at(i, j, k) = (X(i) * Gv(j, k) + X(j) * Gv(i, k) + X(k) * Gv(i, j)) / 3.0;

  double res = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        res = std::max(res, std::abs(br(i, j, k) - 2.0 * expected(i, j, k)));

  const double scale = (1.0 + L.value(x).cwiseAbs().maxCoeff()) *
                       (1.0 + Gv.cwiseAbs().maxCoeff()) *
                       std::max(1.0, X.cwiseAbs().maxCoeff());
  return res / scale;
}

SymTensor2 raise_diagonal(const OperatorField& K, const DiagonalMetric& G) {
  const int n = K.dim();
  if (G.n() != n) throw InvalidModel("metric dimension does not match the operator");
  std::vector<Expression> diag;
  diag.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      if (i != j && !K.entry(i, j).is_zero())
        throw InvalidModel("raise_diagonal expects a diagonal operator");
    diag.push_back(K.entry(i, i) * G.g[static_cast<std::size_t>(i)]);
  }
  return SymTensor2::diagonal(diag);
}

}  // namespace haantjes
