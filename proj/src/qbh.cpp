#include "haantjes/qbh.hpp"

#include <cmath>

namespace haantjes {

std::vector<Expression> elementary_symmetric(const std::vector<Expression>& xs) {
  const std::size_t n = xs.size();
  // sigma[k] after processing i inputs holds sigma_k of those inputs
  std::vector<Expression> sigma(n + 1, Expression::number(0.0));
  sigma[0] = Expression::number(1.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = std::min(i + 1, n); k >= 1; --k)
      sigma[k] = sigma[k] + xs[i] * sigma[k - 1];
  return std::vector<Expression>(sigma.begin() + 1, sigma.end());
}

Eigen::VectorXd elementary_symmetric(const Eigen::VectorXd& xs) {
  const int n = static_cast<int>(xs.size());
  Eigen::VectorXd sigma = Eigen::VectorXd::Zero(n + 1);
  sigma(0) = 1.0;
  for (int i = 0; i < n; ++i)
    for (int k = std::min(i + 1, n); k >= 1; --k) sigma(k) += xs(i) * sigma(k - 1);
  return sigma.tail(n);
}

Expression char_coefficient_partial(const std::vector<Expression>& lambda, int k, int r) {
  const int n = static_cast<int>(lambda.size());
  if (k < 1 || k > n || r < 0 || r >= n) throw InvalidModel("partial derivative index out of range");
  if (k == 1) return Expression::number(1.0);  // c_1 = sigma_1
  std::vector<Expression> rest;
  rest.reserve(static_cast<std::size_t>(n) - 1);
  for (int i = 0; i < n; ++i)
    if (i != r) rest.push_back(lambda[static_cast<std::size_t>(i)]);
  const auto sig = elementary_symmetric(rest);
  const Expression s = sig[static_cast<std::size_t>(k - 2)];  // sigma_{k-1} of the rest
  return (k % 2 == 1) ? s : -s;
}

Eigen::MatrixXd reverse_vandermonde(const Eigen::VectorXd& lambda) {
  const int n = static_cast<int>(lambda.size());
  Eigen::MatrixXd V(n, n);
  for (int i = 0; i < n; ++i) {
    double pw = 1.0;
    for (int j = n - 1; j >= 0; --j) {
      V(i, j) = pw;
      pw *= lambda(i);
    }
  }
  return V;
}

Eigen::MatrixXd reverse_vandermonde_inverse(const Eigen::VectorXd& lambda) {
  const int n = static_cast<int>(lambda.size());
  Eigen::MatrixXd inv(n, n);
  for (int j = 0; j < n; ++j) {
    // sigma_k of the eigenvalues with slot j removed
    Eigen::VectorXd rest(n - 1);
    int t = 0;
    for (int i = 0; i < n; ++i)
      if (i != j) rest(t++) = lambda(i);
    const Eigen::VectorXd sig = n > 1 ? elementary_symmetric(rest) : Eigen::VectorXd();
    double denom = 1.0;
    for (int i = 0; i < n; ++i)
      if (i != j) denom *= lambda(j) - lambda(i);
    if (denom == 0.0) throw DomainError("eigenvalue collision in Vandermonde inverse");
    for (int k = 1; k <= n; ++k) {
      // dc_k/dl_j = (-1)^{k+1} sigma_{k-1}(rest)
      const double s = (k == 1) ? 1.0 : sig(k - 2);
      inv(k - 1, j) = ((k % 2 == 1) ? s : -s) / denom;
    }
  }
  return inv;
}

// ---------------------------------------------------------------------------
// QbhSystem
// ---------------------------------------------------------------------------

namespace {

void require_single_coordinate(const Expression& e, int k, bool allow_p, const std::string& what) {
  std::set<int> qs, ps;
  e.variables(qs, ps);
  for (int i : qs)
    if (i != k)
      throw InvalidModel(what + " must not depend on q" + std::to_string(i + 1) + ": '" + e.str() +
                         "'");
  for (int i : ps)
    if (!allow_p || i != k)
      throw InvalidModel(what + " must not depend on p" + std::to_string(i + 1) + ": '" + e.str() +
                         "'");
}

}  // namespace

QbhSystem::QbhSystem(std::vector<Expression> lambda, std::vector<Expression> f)
    : n_(static_cast<int>(lambda.size())),
      lambda_(std::move(lambda)),
      f_(std::move(f)),
      N_(OperatorField::identity(2)) {
  if (n_ < 1 || n_ > kMaxDof) throw InvalidModel("unsupported chain length");
  if (static_cast<int>(f_.size()) != n_)
    throw InvalidModel("need one separation function per coordinate");
  for (int r = 0; r < n_; ++r) {
    require_single_coordinate(lambda_[static_cast<std::size_t>(r)], r, false,
                              "eigenvalue lambda" + std::to_string(r + 1));
    require_single_coordinate(f_[static_cast<std::size_t>(r)], r, true,
                              "separation function f" + std::to_string(r + 1));
  }

  // closed-form Hamiltonians
  h_.reserve(static_cast<std::size_t>(n_));
  std::vector<Expression> denom(static_cast<std::size_t>(n_), Expression::number(1.0));
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (j != i)
        denom[static_cast<std::size_t>(i)] =
            denom[static_cast<std::size_t>(i)] *
            (lambda_[static_cast<std::size_t>(i)] - lambda_[static_cast<std::size_t>(j)]);
  for (int k = 1; k <= n_; ++k) {
    Expression hk = Expression::number(0.0);
    for (int i = 0; i < n_; ++i)
      hk = hk + char_coefficient_partial(lambda_, k, i) * f_[static_cast<std::size_t>(i)] /
                    denom[static_cast<std::size_t>(i)];
    h_.push_back(hk);
  }

  // operator family K_{k-1} = diag(dc_k/dl_r) on both blocks
  ops_.push_back(OperatorField::identity(2 * n_));
  for (int k = 2; k <= n_; ++k) {
    std::vector<Expression> e(static_cast<std::size_t>(4 * n_ * n_), Expression::number(0.0));
    for (int r = 0; r < n_; ++r) {
      const Expression d = char_coefficient_partial(lambda_, k, r);
      e[static_cast<std::size_t>(r) * 2 * n_ + r] = d;
      e[static_cast<std::size_t>(n_ + r) * 2 * n_ + (n_ + r)] = d;
    }
    ops_.emplace_back(2 * n_, std::move(e));
  }

  GeneratorSpec gen{lambda_};
  N_ = generator_field(gen, n_);
}

StackelSystem QbhSystem::build_stackel() const {
  // S = reverse Vandermonde in the lambda_r: row r is [l_r^{n-1}, ..., l_r, 1].
  std::vector<Expression> entries;
  entries.reserve(static_cast<std::size_t>(n_) * n_);
  for (int r = 0; r < n_; ++r)
    for (int j = 0; j < n_; ++j)
      entries.push_back(pow(lambda_[static_cast<std::size_t>(r)],
                            Expression::number(static_cast<double>(n_ - 1 - j))));
  return StackelSystem(StackelMatrix(n_, std::move(entries)), f_);
}

double QbhSystem::control_identity_residual(const PhasePoint& x) const {
  const Eigen::MatrixXd N = N_.value(x);
  Eigen::VectorXd l(n_);
  for (int r = 0; r < n_; ++r) l(r) = lambda_[static_cast<std::size_t>(r)].eval(x);
  Eigen::VectorXd sigma = elementary_symmetric(l);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(2 * n_, 2 * n_);
  Eigen::MatrixXd e = I;
  double res = (ops_[0].value(x) - e).cwiseAbs().maxCoeff();
  for (int k = 2; k <= n_; ++k) {
    const double ck = ((k - 1) % 2 == 1 ? 1.0 : -1.0) * sigma(k - 2);  // c_{k-1}
    e = N * e - ck * I;
    res = std::max(res, (ops_[static_cast<std::size_t>(k - 1)].value(x) - e).cwiseAbs().maxCoeff());
  }
  return res;
}

// ---------------------------------------------------------------------------
// goldfish
// ---------------------------------------------------------------------------

QbhSystem goldfish_system(const GoldfishModel& m) {
  if (m.n < 2 || m.n > kMaxDof) throw InvalidModel("goldfish needs 2 <= n <= 8 particles");
  std::vector<Expression> lambda, f;
  const Expression a = Expression::parameter("a", m.a);
  const Expression b = Expression::parameter("b", m.b);
  for (int i = 0; i < m.n; ++i) {
    lambda.push_back(Expression::q(i));
    f.push_back(exp(a * Expression::p(i)) +
                b * pow(Expression::q(i), Expression::number(static_cast<double>(m.n))));
  }
  return QbhSystem(std::move(lambda), std::move(f));
}

Expression goldfish_hamiltonian_expression(const GoldfishModel& m) {
  const Expression a = Expression::parameter("a", m.a);
  const Expression b = Expression::parameter("b", m.b);
  Expression H = Expression::number(0.0);
  for (int i = 0; i < m.n; ++i) {
    Expression denom = Expression::number(1.0);
    for (int j = 0; j < m.n; ++j)
      if (j != i) denom = denom * (Expression::q(i) - Expression::q(j));
    H = H + exp(a * Expression::p(i)) / denom + b * Expression::q(i);
  }
  return H;
}

double goldfish_hamiltonian(const GoldfishModel& m, const PhasePoint& x) {
  return goldfish_hamiltonian_expression(m).eval(x);
}

double jacobi_identity_residual(const Eigen::VectorXd& q) {
  const int n = static_cast<int>(q.size());
  double lhs = 0.0, rhs = 0.0, scale = 1.0;
  for (int i = 0; i < n; ++i) {
    double denom = 1.0;
    for (int j = 0; j < n; ++j)
      if (j != i) denom *= q(i) - q(j);
    if (denom == 0.0) throw DomainError("coincident coordinates in the interpolation identity");
    const double term = std::pow(q(i), n) / denom;
    lhs += term;
    rhs += q(i);
    scale = std::max(scale, std::abs(term));
  }
  return std::abs(lhs - rhs) / scale;
}

Eigen::VectorXd goldfish_newton_residual(const GoldfishModel& m, const PhasePoint& x, double h) {
  const Expression H = goldfish_hamiltonian_expression(m);
  const int n = m.n;

  // gradient of H split into (H_q, H_p); velocities qd = H_p, forces pd = -H_q
  const auto grad = [&](const PhasePoint& pt) {
    const DualValue d = H.eval_dual(pt);
    return d.gradient;
  };
  const std::vector<double> g0 = grad(x);

  // second derivatives d^2 H / dx_a dx_b by central differences of the
  // exact gradient field
  const int dim = 2 * n;
  Eigen::MatrixXd hess(dim, dim);
  for (int a = 0; a < dim; ++a) {
    PhasePoint xp = x, xm = x;
    xp.coord(a) += h;
    xm.coord(a) -= h;
    const std::vector<double> gp = grad(xp);
    const std::vector<double> gm = grad(xm);
    for (int b = 0; b < dim; ++b)
      hess(b, a) = (gp[static_cast<std::size_t>(b)] - gm[static_cast<std::size_t>(b)]) / (2.0 * h);
  }

  Eigen::VectorXd qd(n), pd(n);
  for (int k = 0; k < n; ++k) {
    qd(k) = g0[static_cast<std::size_t>(n + k)];
    pd(k) = -g0[static_cast<std::size_t>(k)];
  }

  // qdd_k = d/dt dH/dp_k = sum_a [H_{p_k q_a} qd_a + H_{p_k p_a} pd_a]
  Eigen::VectorXd qdd(n);
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int a = 0; a < n; ++a) s += hess(n + k, a) * qd(a) + hess(n + k, n + a) * pd(a);
    qdd(k) = s;
  }

  Eigen::VectorXd res(n);
  for (int k = 0; k < n; ++k) {
    double rhs = -m.a * m.b * qd(k);
    for (int i = 0; i < n; ++i) {
      if (i == k) continue;
      rhs += 2.0 * qd(k) * qd(i) / (x.q(k) - x.q(i));
    }
    res(k) = std::abs(qdd(k) - rhs) / std::max(1.0, std::abs(rhs));
  }
  return res;
}

}  // namespace haantjes
