#include "haantjes/stackel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace haantjes {

namespace {

int permutation_sign(const std::vector<int>& perm) {
  int inversions = 0;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

// Locality guard: the expression may reference only the listed coordinates.
void require_locality(const Expression& e, const std::set<int>& q_ok, const std::set<int>& p_ok,
                      const std::string& what) {
  std::set<int> qs, ps;
  e.variables(qs, ps);
  for (int i : qs)
    if (!q_ok.count(i))
      throw InvalidModel(what + " must not depend on q" + std::to_string(i + 1) + ": '" +
                         e.str() + "'");
  for (int i : ps)
    if (!p_ok.count(i))
      throw InvalidModel(what + " must not depend on p" + std::to_string(i + 1) + ": '" +
                         e.str() + "'");
}

constexpr int kMaxSymbolicDet = 6;

}  // namespace

Expression determinant_expression(const std::vector<Expression>& entries, int n) {
  if (n < 1) throw InvalidModel("empty determinant");
  if (n > kMaxSymbolicDet)
    throw InvalidModel("symbolic determinants supported up to " +
                       std::to_string(kMaxSymbolicDet) + "x" + std::to_string(kMaxSymbolicDet));
  const auto at = [&](int i, int j) -> const Expression& {
    return entries[static_cast<std::size_t>(i) * n + j];
  };
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  Expression det = Expression::number(0.0);
  do {
    Expression term = Expression::number(static_cast<double>(permutation_sign(perm)));
    for (int i = 0; i < n; ++i) term = term * at(i, perm[static_cast<std::size_t>(i)]);
    det = det + term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

Expression adjugate_entry_expression(const std::vector<Expression>& entries, int n, int j, int k) {
  // adj(j,k) is the (k,j) cofactor: delete row k and column j.
  if (n == 1) return Expression::number(1.0);
  std::vector<Expression> minor;
  minor.reserve(static_cast<std::size_t>(n - 1) * (n - 1));
  for (int r = 0; r < n; ++r) {
    if (r == k) continue;
    for (int c = 0; c < n; ++c) {
      if (c == j) continue;
      minor.push_back(entries[static_cast<std::size_t>(r) * n + c]);
    }
  }
  Expression m = determinant_expression(minor, n - 1);
  return ((j + k) % 2 == 0) ? m : -m;
}

// ---------------------------------------------------------------------------
// StackelMatrix
// ---------------------------------------------------------------------------

StackelMatrix::StackelMatrix(int n, std::vector<Expression> entries)
    : n_(n), entries_(std::move(entries)) {
  if (n_ < 1 || n_ > kMaxDof) throw InvalidModel("unsupported Stackel matrix size");
  if (entries_.size() != static_cast<std::size_t>(n_) * n_)
    throw InvalidModel("Stackel matrix needs n*n entries");
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      require_locality(entry(i, j), {i}, {},
                       "Stackel row " + std::to_string(i + 1) + " entry");
}

Eigen::MatrixXd StackelMatrix::value(const Eigen::VectorXd& q) const {
  if (q.size() != n_) throw InvalidModel("Stackel matrix evaluated at a wrong-sized point");
  PhasePoint x(n_);
  for (int i = 0; i < n_; ++i) x.q(i) = q(i);
  Eigen::MatrixXd S(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) S(i, j) = entry(i, j).eval(x);
  return S;
}

StackelMatrix::Cofactors StackelMatrix::cofactors(const Eigen::VectorXd& q) const {
  const Eigen::MatrixXd S = value(q);
  Cofactors out;
  out.det = S.determinant();
  if (out.det == 0.0)
    throw InvalidModel("singular Stackel matrix (det = 0) at the requested point");
  out.adj.resize(n_, n_);
  if (n_ == 1) {
    out.adj(0, 0) = 1.0;
    return out;
  }
  Eigen::MatrixXd minor(n_ - 1, n_ - 1);
  for (int j = 0; j < n_; ++j)
    for (int k = 0; k < n_; ++k) {
      int mr = 0;
      for (int r = 0; r < n_; ++r) {
        if (r == k) continue;
        int mc = 0;
        for (int c = 0; c < n_; ++c) {
          if (c == j) continue;
          minor(mr, mc) = S(r, c);
          ++mc;
        }
        ++mr;
      }
      const double m = minor.determinant();
      out.adj(j, k) = ((j + k) % 2 == 0) ? m : -m;
    }
  return out;
}

Expression StackelMatrix::det_expression() const {
  return determinant_expression(entries_, n_);
}

Expression StackelMatrix::adjugate_expression(int j, int k) const {
  return adjugate_entry_expression(entries_, n_, j, k);
}

// ---------------------------------------------------------------------------
// chains and operators
// ---------------------------------------------------------------------------

std::vector<Expression> stackel_chain_expressions(const StackelMatrix& S,
                                                  const std::vector<Expression>& f) {
  const int n = S.n();
  if (static_cast<int>(f.size()) != n)
    throw InvalidModel("need one Stackel function per coordinate");
  const Expression det = S.det_expression();
  std::vector<Expression> h;
  h.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    Expression hj = Expression::number(0.0);
    for (int k = 0; k < n; ++k)
      hj = hj + (S.adjugate_expression(j, k) / det) * f[static_cast<std::size_t>(k)];
    h.push_back(hj);
  }
  return h;
}

StackelSystem::StackelSystem(StackelMatrix S, std::vector<Expression> f)
    : S_(std::move(S)), f_(std::move(f)) {
  const int n = S_.n();
  if (static_cast<int>(f_.size()) != n)
    throw InvalidModel("need one Stackel function per coordinate");
  for (int k = 0; k < n; ++k)
    require_locality(f_[static_cast<std::size_t>(k)], {k}, {k},
                     "Stackel function f" + std::to_string(k + 1));
  h_ = stackel_chain_expressions(S_, f_);

  ops_.push_back(OperatorField::identity(2 * n));
  std::vector<Expression> adj1(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) adj1[static_cast<std::size_t>(r)] = S_.adjugate_expression(0, r);
  for (int j = 1; j < n; ++j) {
    std::vector<Expression> e(static_cast<std::size_t>(4 * n * n), Expression::number(0.0));
    for (int r = 0; r < n; ++r) {
      const Expression ratio = S_.adjugate_expression(j, r) / adj1[static_cast<std::size_t>(r)];
      e[static_cast<std::size_t>(r) * 2 * n + r] = ratio;
      e[static_cast<std::size_t>(n + r) * 2 * n + (n + r)] = ratio;
    }
    ops_.emplace_back(2 * n, std::move(e));
  }
}

std::vector<double> StackelSystem::hamiltonians(const PhasePoint& x) const {
  const int n = S_.n();
  Eigen::VectorXd q(n);
  for (int i = 0; i < n; ++i) q(i) = x.q(i);
  const auto cof = S_.cofactors(q);
  std::vector<double> h(static_cast<std::size_t>(n), 0.0);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      h[static_cast<std::size_t>(j)] +=
          cof.adj(j, k) / cof.det * f_[static_cast<std::size_t>(k)].eval(x);
  return h;
}

// ---------------------------------------------------------------------------
// generator and bases
// ---------------------------------------------------------------------------

OperatorField generator_field(const GeneratorSpec& gen, int n) {
  if (static_cast<int>(gen.lambda.size()) != n)
    throw InvalidModel("generator needs one eigenvalue function per coordinate");
  for (const auto& l : gen.lambda) {
    std::set<int> qs, ps;
    l.variables(qs, ps);
    if (!ps.empty()) throw InvalidModel("generator eigenvalues must depend on positions only");
  }
  std::vector<Expression> e(static_cast<std::size_t>(4 * n * n), Expression::number(0.0));
  for (int r = 0; r < n; ++r) {
    e[static_cast<std::size_t>(r) * 2 * n + r] = gen.lambda[static_cast<std::size_t>(r)];
    e[static_cast<std::size_t>(n + r) * 2 * n + (n + r)] = gen.lambda[static_cast<std::size_t>(r)];
  }
  return OperatorField(2 * n, std::move(e));
}

namespace {

Eigen::VectorXd eigenvalues_at(const GeneratorSpec& gen, const PhasePoint& x,
                               double collision_tol) {
  const int n = static_cast<int>(gen.lambda.size());
  Eigen::VectorXd l(n);
  for (int r = 0; r < n; ++r) l(r) = gen.lambda[static_cast<std::size_t>(r)].eval(x);
  const double scale = std::max(1.0, l.cwiseAbs().maxCoeff());
  for (int r = 0; r < n; ++r)
    for (int s = r + 1; s < n; ++s)
      if (std::abs(l(r) - l(s)) <= collision_tol * scale)
        throw DomainError("generator eigenvalue collision between coordinates " +
                          std::to_string(r + 1) + " and " + std::to_string(s + 1));
  return l;
}

// c_k = (-1)^{k+1} sigma_k: minimal polynomial lambda^n - c_1 lambda^{n-1} - ... - c_n.
Eigen::VectorXd char_coefficients(const Eigen::VectorXd& lambda) {
  const int n = static_cast<int>(lambda.size());
  std::vector<double> sigma(static_cast<std::size_t>(n) + 1, 0.0);
  sigma[0] = 1.0;
  for (int i = 0; i < n; ++i)
    for (int k = i + 1; k >= 1; --k)
      sigma[static_cast<std::size_t>(k)] += lambda(i) * sigma[static_cast<std::size_t>(k - 1)];
  Eigen::VectorXd c(n);
  for (int k = 1; k <= n; ++k)
    c(k - 1) = ((k % 2 == 1) ? 1.0 : -1.0) * sigma[static_cast<std::size_t>(k)];
  return c;
}

}  // namespace

std::vector<Eigen::MatrixXd> interpolation_projectors(const GeneratorSpec& gen,
                                                      const PhasePoint& x, double collision_tol) {
  const int n = static_cast<int>(gen.lambda.size());
  const Eigen::VectorXd l = eigenvalues_at(gen, x, collision_tol);
  const OperatorField Kf = generator_field(gen, n);
  const Eigen::MatrixXd K = Kf.value(x);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(2 * n, 2 * n);
  std::vector<Eigen::MatrixXd> projectors;
  projectors.reserve(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) {
    Eigen::MatrixXd pi = I;
    for (int i = 0; i < n; ++i) {
      if (i == r) continue;
      pi = pi * (K - l(i) * I) / (l(r) - l(i));
    }
    projectors.push_back(std::move(pi));
  }
  return projectors;
}

BasisCoefficients basis_coefficients(const StackelSystem& sys, const GeneratorSpec& gen,
                                     const PhasePoint& x, double collision_tol) {
  const int n = sys.n();
  if (static_cast<int>(gen.lambda.size()) != n)
    throw InvalidModel("generator size does not match the system");
  BasisCoefficients out;
  out.lambda = eigenvalues_at(gen, x, collision_tol);
  out.c = char_coefficients(out.lambda);

  // Vandermonde rows [1, l_r, l_r^2, ...]; its columns are the eigenvalue
  // lists of the cyclic basis I, K, K^2, ...
  out.vandermonde.resize(n, n);
  for (int r = 0; r < n; ++r) {
    double pw = 1.0;
    for (int j = 0; j < n; ++j) {
      out.vandermonde(r, j) = pw;
      pw *= out.lambda(r);
    }
  }
  {
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(out.vandermonde);
    const auto& s = svd.singularValues();
    out.vandermonde_condition = s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1)
                                                      : std::numeric_limits<double>::infinity();
  }

  // transition to the control basis: column j holds 1 on the diagonal and
  // -c_{j-i} above it, so that (V * H_R)(r,j) = e_{j+1}(l_r).
  out.transition = Eigen::MatrixXd::Identity(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < j; ++i) out.transition(i, j) = -out.c(j - i - 1);

  const OperatorField genf = generator_field(gen, n);
  const Eigen::MatrixXd K = genf.value(x);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(2 * n, 2 * n);

  // control basis by the recurrence e_{j+1} = K e_j - c_j I
  out.control.push_back(I);
  for (int j = 1; j < n; ++j) out.control.push_back(K * out.control.back() - out.c(j - 1) * I);

  // powers of K for the cyclic reconstruction
  std::vector<Eigen::MatrixXd> powers{I};
  for (int j = 1; j < n; ++j) powers.push_back(K * powers.back());

  out.cyclic.resize(n, n);
  const auto qr = out.vandermonde.colPivHouseholderQr();
  for (int j = 0; j < n; ++j) {
    const Eigen::MatrixXd Kj = sys.operators()[static_cast<std::size_t>(j)].value(x);
    Eigen::VectorXd rhs(n);
    for (int r = 0; r < n; ++r) rhs(r) = Kj(r, r);  // operator eigenvalue list
    const Eigen::VectorXd a = qr.solve(rhs);
    out.cyclic.col(j) = a;

    Eigen::MatrixXd rec = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) rec += a(i) * powers[static_cast<std::size_t>(i)];
    const double scale = 1.0 + Kj.cwiseAbs().maxCoeff();
    out.max_cyclic_residual =
        std::max(out.max_cyclic_residual, (rec - Kj).cwiseAbs().maxCoeff() / scale);

    // control coefficients b = H_R^{-1} a reconstruct K_j from e_1..e_n
    const Eigen::VectorXd b = out.transition.triangularView<Eigen::Upper>().solve(a);
    Eigen::MatrixXd recc = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) recc += b(i) * out.control[static_cast<std::size_t>(i)];
    out.max_control_residual =
        std::max(out.max_control_residual, (recc - Kj).cwiseAbs().maxCoeff() / scale);
  }

  // projector checks: partition of unity, orthogonality, coordinate planes
  const auto projectors = interpolation_projectors(gen, x, collision_tol);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int r = 0; r < n; ++r) {
    sum += projectors[static_cast<std::size_t>(r)];
    Eigen::MatrixXd plane = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    plane(r, r) = 1.0;
    plane(n + r, n + r) = 1.0;
    out.partition_residual =
        std::max(out.partition_residual,
                 (projectors[static_cast<std::size_t>(r)] - plane).cwiseAbs().maxCoeff());
    for (int s = 0; s < n; ++s) {
      const Eigen::MatrixXd prod =
          projectors[static_cast<std::size_t>(r)] * projectors[static_cast<std::size_t>(s)];
      const Eigen::MatrixXd expect = (r == s) ? projectors[static_cast<std::size_t>(r)]
                                              : Eigen::MatrixXd::Zero(2 * n, 2 * n);
      out.partition_residual =
          std::max(out.partition_residual, (prod - expect).cwiseAbs().maxCoeff());
    }
  }
  out.partition_residual = std::max(out.partition_residual, (sum - I).cwiseAbs().maxCoeff());

  // eigenvalue form of the change of basis: (V H_R)(r,j) = e_{j+1} eigenvalue
  const Eigen::MatrixXd VH = out.vandermonde * out.transition;
  for (int j = 0; j < n; ++j)
    for (int r = 0; r < n; ++r)
      out.eigen_transition_residual =
          std::max(out.eigen_transition_residual,
                   std::abs(VH(r, j) - out.control[static_cast<std::size_t>(j)](r, r)));

  return out;
}

// ---------------------------------------------------------------------------
// projection and potentials
// ---------------------------------------------------------------------------

OperatorField project_to_configuration(const OperatorField& K,
                                       const std::vector<PhasePoint>& samples, double tol) {
  const int m = K.dim();
  if (m % 2 != 0) throw InvalidModel("projection needs a phase-space operator");
  const int n = m / 2;
  if (samples.empty()) throw InvalidModel("projection check needs sample points");

  for (const auto& x : samples) {
    Eigen::MatrixXd V;
    std::vector<Eigen::MatrixXd> D;
    K.value_and_derivatives(x, V, D);
    const double scale = 1.0 + V.cwiseAbs().maxCoeff();
    const double offblock = V.block(0, n, n, n).cwiseAbs().maxCoeff();
    if (offblock > tol * scale)
      throw InvalidModel("operator does not project: the (q,p) block is nonzero (max " +
                         std::to_string(offblock) + ")");
    double pdep = 0.0;
    for (int a = n; a < m; ++a)
      pdep = std::max(pdep, D[static_cast<std::size_t>(a)].topLeftCorner(n, n)
                                .cwiseAbs()
                                .maxCoeff());
    if (pdep > tol * scale)
      throw InvalidModel("operator does not project: its base block depends on the momenta (max " +
                         std::to_string(pdep) + ")");
  }

  std::vector<Expression> entries;
  entries.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) entries.push_back(K.entry(i, j));
  return OperatorField(n, std::move(entries));
}

PotentialChain potential_chain(const StackelMatrix& S, const std::vector<Expression>& psi,
                               const std::vector<Expression>& W) {
  const int n = S.n();
  if (static_cast<int>(psi.size()) != n || static_cast<int>(W.size()) != n)
    throw InvalidModel("need one kinetic and one potential function per coordinate");
  for (int k = 0; k < n; ++k) {
    require_locality(psi[static_cast<std::size_t>(k)], {}, {k},
                     "kinetic part psi" + std::to_string(k + 1));
    require_locality(W[static_cast<std::size_t>(k)], {k}, {},
                     "potential part W" + std::to_string(k + 1));
  }
  PotentialChain out;
  out.kinetic = stackel_chain_expressions(S, psi);
  out.potential = stackel_chain_expressions(S, W);
  return out;
}

}  // namespace haantjes
