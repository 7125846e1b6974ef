#include "haantjes/structure.hpp"

#include "haantjes/brackets.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace haantjes {

HaantjesStructure::HaantjesStructure(int n_dof, std::vector<OperatorField> ops)
    : n(n_dof), operators(std::move(ops)) {
  if (n < 1 || n > kMaxDof) throw InvalidModel("unsupported number of degrees of freedom");
  if (operators.empty()) throw InvalidModel("a Haantjes structure needs at least one operator");
  for (const auto& k : operators)
    if (k.dim() != 2 * n) throw InvalidModel("structure operators must act on the full phase space");
}

namespace {

// Random polynomial of given degree in all 2n phase coordinates, coefficients
// uniform in [-1, 1]. Used as module-closure coefficient fields.
Expression random_phase_polynomial(Rng& rng, int n, int degree) {
  std::vector<Expression> vars;
  for (int i = 0; i < n; ++i) vars.push_back(Expression::q(i));
  for (int i = 0; i < n; ++i) vars.push_back(Expression::p(i));
  Expression poly = Expression::number(rng.uniform(-1.0, 1.0));
  if (degree >= 1)
    for (const auto& v : vars) poly = poly + Expression::number(rng.uniform(-1.0, 1.0)) * v;
  if (degree >= 2)
    for (std::size_t i = 0; i < vars.size(); ++i)
      for (std::size_t j = i; j < vars.size(); ++j)
        poly = poly + Expression::number(rng.uniform(-1.0, 1.0)) * vars[i] * vars[j];
  return poly;
}

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

VerificationReport verify_structure(const HaantjesStructure& s,
                                    const std::vector<PhasePoint>& samples,
                                    const StructureCheckOptions& opt) {
  VerificationReport report;
  const int m = 2 * s.n;
  const SymplecticForm w(s.n);
  const std::size_t nops = s.operators.size();
  const int nsamp = static_cast<int>(samples.size());
  const auto pfx = [&](const std::string& tail) { return opt.id_prefix + "." + tail; };
  const auto opname = [&](std::size_t a) { return "K" + std::to_string(a); };

  // axiom: K_0 is the identity
  {
    double r = 0.0;
    for (const auto& x : samples)
      r = std::max(r, max_abs(s.operators[0].value(x) - Eigen::MatrixXd::Identity(m, m)));
    report.add(pfx("identity"), nsamp, r, 1e-12);
  }

  // axiom: every operator has vanishing Haantjes tensor
  for (std::size_t a = 0; a < nops; ++a) {
    const ResidualSummary res = verify_haantjes_vanishing(s.operators[a], samples);
    report.add(pfx("haantjes." + opname(a)), res.samples, res.max_residual, opt.tol);
  }

  // axiom: compatibility K^T omega = omega K
  for (std::size_t a = 1; a < nops; ++a) {
    double r = 0.0;
    for (const auto& x : samples) {
      const Eigen::MatrixXd K = s.operators[a].value(x);
      r = std::max(r, max_abs(K.transpose() * w.omega() - w.omega() * K) / (1.0 + max_abs(K)));
    }
    report.add(pfx("compat." + opname(a)), nsamp, r, opt.tol);
  }

  // axiom: pairwise commutation
  for (std::size_t a = 1; a < nops; ++a)
    for (std::size_t b = a + 1; b < nops; ++b) {
      double r = 0.0;
      for (const auto& x : samples) {
        const Eigen::MatrixXd Ka = s.operators[a].value(x);
        const Eigen::MatrixXd Kb = s.operators[b].value(x);
        r = std::max(r, max_abs(Ka * Kb - Kb * Ka) / ((1.0 + max_abs(Ka)) * (1.0 + max_abs(Kb))));
      }
      report.add(pfx("commute." + opname(a) + "." + opname(b)), nsamp, r, opt.tol);
    }

  // axiom: module closure. The span of the K_a over smooth functions must
  // consist of Haantjes operators; probe it with random polynomial
  // coefficient tuples.
  {
    Rng rng = Rng(opt.seed).fork(opt.id_prefix + ".module");
    double r = 0.0;
    int total = 0;
    for (int t = 0; t < opt.module_fields; ++t) {
      std::vector<Expression> coeffs;
      coeffs.reserve(nops);
      for (std::size_t a = 0; a < nops; ++a)
        coeffs.push_back(random_phase_polynomial(rng, s.n, opt.module_degree));
      const OperatorField combo = OperatorField::linear_combination(coeffs, s.operators);
      const ResidualSummary res = verify_haantjes_vanishing(combo, samples);
      r = std::max(r, res.max_residual);
      total += res.samples;
    }
    report.add(pfx("module"), total, r, opt.tol,
               "fields=" + std::to_string(opt.module_fields));
  }

  return report;
}

std::vector<double> verify_lenard_chain(const HaantjesStructure& s, const ChainSpec& chain,
                                        const std::vector<PhasePoint>& samples) {
  if (chain.hamiltonians.size() > s.operators.size())
    throw InvalidModel("chain longer than the operator family");
  const int m = 2 * s.n;
  std::vector<double> residuals(chain.hamiltonians.size(), 0.0);
  for (const auto& x : samples) {
    const DualValue d1 = chain.hamiltonians[0].eval_dual(x);
    const Eigen::Map<const Eigen::VectorXd> dH1(d1.gradient.data(), m);
    const double scale = std::max(dH1.cwiseAbs().maxCoeff(), 1e-300);
    for (std::size_t j = 0; j < chain.hamiltonians.size(); ++j) {
      const DualValue dj = chain.hamiltonians[j].eval_dual(x);
      const Eigen::Map<const Eigen::VectorXd> dHj(dj.gradient.data(), m);
      const Eigen::MatrixXd K = s.operators[j].value(x);
      const double r = (dHj - K.transpose() * dH1).cwiseAbs().maxCoeff() / scale;
      residuals[j] = std::max(residuals[j], r);
    }
  }
  return residuals;
}

EigenAnalysis eigen_analysis(const OperatorField& L, const PhasePoint& x, double tol) {
  const Eigen::MatrixXd V = L.value(x);
  const int m = static_cast<int>(V.rows());
  Eigen::EigenSolver<Eigen::MatrixXd> solver(V);
  EigenAnalysis out;
  const double scale = std::max(1.0, V.cwiseAbs().maxCoeff());

  double max_imag = 0.0;
  std::vector<double> real_parts;
  for (int i = 0; i < m; ++i) {
    const std::complex<double> ev = solver.eigenvalues()(i);
    out.eigenvalues.push_back(ev);
    max_imag = std::max(max_imag, std::abs(ev.imag()));
    real_parts.push_back(ev.real());
  }
  out.real = max_imag <= tol * scale;

  // semisimplicity via the conditioning of the eigenvector matrix
  const Eigen::MatrixXcd E = solver.eigenvectors();
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(E);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  out.semisimple = smin > 0.0 && svd.singularValues()(0) / smin < 1e8;

  // gap clustering on the real parts
  std::sort(real_parts.begin(), real_parts.end());
  const double gap = tol * scale;
  std::size_t i = 0;
  while (i < real_parts.size()) {
    std::size_t j = i + 1;
    double sum = real_parts[i];
    while (j < real_parts.size() && real_parts[j] - real_parts[j - 1] <= gap) {
      sum += real_parts[j];
      ++j;
    }
    out.cluster_values.push_back(sum / static_cast<double>(j - i));
    out.multiplicities.push_back(static_cast<int>(j - i));
    i = j;
  }
  out.distinct = true;
  for (std::size_t k = 1; k < out.cluster_values.size(); ++k)
    if (out.cluster_values[k] - out.cluster_values[k - 1] <= gap) out.distinct = false;
  out.doubled = true;
  for (int mult : out.multiplicities)
    if (mult % 2 != 0) out.doubled = false;
  return out;
}

std::vector<FramePairResult> check_frame_integrability(const std::vector<VectorField>& frame,
                                                       const std::vector<PhasePoint>& samples,
                                                       double tol) {
  std::vector<FramePairResult> results;
  for (std::size_t i = 0; i < frame.size(); ++i)
    for (std::size_t j = i + 1; j < frame.size(); ++j) {
      FramePairResult r;
      r.i = static_cast<int>(i);
      r.j = static_cast<int>(j);
      r.involutive = true;
      for (const auto& x : samples) {
        const Eigen::VectorXd yi = frame[i].value(x);
        const Eigen::VectorXd yj = frame[j].value(x);
        Eigen::MatrixXd pair(2, yi.size());
        pair.row(0) = yi;
        pair.row(1) = yj;
        if (covector_rank(pair, tol) < 2) {
          ++r.degenerate;  // pair itself degenerate here; nothing to test
          continue;
        }
        const Eigen::VectorXd br = lie_bracket(frame[i], frame[j], x);
        Eigen::MatrixXd triple(3, yi.size());
        triple.row(0) = yi;
        triple.row(1) = yj;
        triple.row(2) = br;
        ++r.checked;
        if (covector_rank(triple, tol) > 2) r.involutive = false;
      }
      results.push_back(r);
    }
  return results;
}

}  // namespace haantjes
