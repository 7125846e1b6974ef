// Acceptance battery: one criterion per structural guarantee the library
// makes, each printed as a single [PASS]/[FAIL] line. The process exits
// nonzero when any criterion fails. argv[1] names the command-line binary
// used by the final criterion.
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "haantjes/benenti.hpp"
#include "haantjes/brackets.hpp"
#include "haantjes/calogero.hpp"
#include "haantjes/expression.hpp"
#include "haantjes/model.hpp"
#include "haantjes/qbh.hpp"
#include "haantjes/rng.hpp"
#include "haantjes/stackel.hpp"
#include "haantjes/structure.hpp"
#include "haantjes/tensors.hpp"
#include "haantjes/verify.hpp"

using namespace haantjes;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
  void bound(double value, double tol, const std::string& what) {
    if (value > tol && pass) {
      pass = false;
      std::ostringstream os;
      os << what << " = " << value << " exceeds " << tol;
      detail = os.str();
    }
  }
};

// ---- sampling helpers -------------------------------------------------

std::vector<PhasePoint> spread_points(int n, int count, Rng& rng, double gap, double plo,
                                      double phi) {
  std::vector<PhasePoint> pts;
  int guard = 0;
  while (static_cast<int>(pts.size()) < count && ++guard < 1000000) {
    PhasePoint x(n);
    for (int i = 0; i < n; ++i) x.q(i) = rng.uniform(-2.0, 2.0);
    for (int i = 0; i < n; ++i) x.p(i) = rng.uniform(plo, phi);
    bool ok = true;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (std::abs(x.q(i) - x.q(j)) < gap) ok = false;
    if (ok) pts.push_back(x);
  }
  return pts;
}

// coordinates near distinct integers: keeps interpolation denominators and
// Vandermonde solves well conditioned
PhasePoint lattice_point(int n, Rng& rng) {
  PhasePoint x(n);
  for (int i = 0; i < n; ++i)
    x.q(i) = static_cast<double>(i) - 0.5 * (n - 1) + rng.uniform(-0.15, 0.15);
  for (int i = 0; i < n; ++i) x.p(i) = rng.uniform(-2.0, 2.0);
  return x;
}

// ---- random separable systems -----------------------------------------

// Row r holds column polynomials evaluated at q_r: S(r, j) = P_j(q_r) with
// deg P_j <= 2. Such a matrix factors through the monomial matrix in q_r, so
// it stays invertible wherever the coordinates are distinct and the constant
// coefficient matrix is.
StackelMatrix random_matrix(int n, Rng& rng) {
  Eigen::MatrixXd C;
  for (;;) {
    C = Eigen::MatrixXd(3, n);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < n; ++j) C(i, j) = rng.uniform(-1.0, 1.0);
    if (n == 3 && std::abs(C.determinant()) < 0.4) continue;
    break;
  }
  std::vector<Expression> entries;
  entries.reserve(static_cast<std::size_t>(n) * n);
  for (int r = 0; r < n; ++r)
    for (int j = 0; j < n; ++j)
      entries.push_back(Expression::number(C(0, j)) * Expression::q(r) * Expression::q(r) +
                        Expression::number(C(1, j)) * Expression::q(r) +
                        Expression::number(C(2, j)));
  return StackelMatrix(n, std::move(entries));
}

Expression random_polynomial(int slot, int degree, Rng& rng) {
  Expression out = Expression::number(rng.uniform(-1.0, 1.0));
  Expression power = Expression::q(slot);
  for (int d = 1; d <= degree; ++d) {
    out = out + Expression::number(rng.uniform(-1.0, 1.0)) * power;
    if (d < degree) power = power * Expression::q(slot);
  }
  return out;
}

std::vector<PhasePoint> sample_separable(const StackelMatrix& S, int count, Rng& rng) {
  const int n = S.n();
  std::vector<PhasePoint> pts;
  int guard = 0;
  while (static_cast<int>(pts.size()) < count && ++guard < 1000000) {
    PhasePoint x(n);
    for (int i = 0; i < n; ++i) x.q(i) = rng.uniform(-2.0, 2.0);
    for (int i = 0; i < n; ++i) x.p(i) = rng.uniform(-2.0, 2.0);
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      for (int j = i + 1; j < n; ++j)
        if (std::abs(x.q(i) - x.q(j)) < 0.25) ok = false;
    if (!ok) continue;
    Eigen::VectorXd q(n);
    for (int i = 0; i < n; ++i) q(i) = x.q(i);
    try {
      const auto cof = S.cofactors(q);
      if (std::abs(cof.det) < 0.1) continue;
      for (int r = 0; r < n; ++r)
        if (std::abs(cof.adj(0, r)) < 0.05) ok = false;
    } catch (const InvalidModel&) {
      continue;
    }
    if (ok) pts.push_back(x);
  }
  return pts;
}

const CheckRecord* find_record(const VerificationReport& rep, const std::string& id) {
  for (const auto& r : rep.records())
    if (r.id == id) return &r;
  return nullptr;
}

// ---- criteria ----------------------------------------------------------

Outcome criterion_gradients() {
  Outcome out;
  const std::vector<std::string> texts = {
      "q1^2*p1 + sin(q2)*exp(p2)", "sqrt(4 + q1^2 + p2^2)", "1/(2 + sin(q1 + p1))",
      "cos(q1*p2) - log(4 + q2)",  "(q1 + q2 + p1)^3",      "exp(-q1^2/2)*cos(p1)"};
  Rng rng(101);
  for (const auto& text : texts) {
    const Expression e = parse_expression(text, 2);
    for (int trial = 0; trial < 30; ++trial) {
      PhasePoint x(2);
      for (int a = 0; a < 4; ++a) x.coord(a) = rng.uniform(-2.0, 2.0);
      const DualValue d = e.eval_dual(x);
      for (int a = 0; a < 4; ++a) {
        PhasePoint xp = x, xm = x;
        const double h = 1e-6;
        xp.coord(a) += h;
        xm.coord(a) -= h;
        const double fd = (e.eval(xp) - e.eval(xm)) / (2 * h);
        const double ad = d.gradient[static_cast<std::size_t>(a)];
        const double rel = std::abs(ad - fd) / std::max({1.0, std::abs(ad), std::abs(fd)});
        out.bound(rel, 1e-6, "gradient mismatch for " + text);
      }
    }
  }
  return out;
}

Outcome criterion_companion() {
  Outcome out;
  std::vector<Expression> entries(4);
  entries[0] = Expression::number(0.0);
  entries[1] = Expression::number(1.0);
  entries[2] = Expression::q(0);
  entries[3] = Expression::number(0.0);
  const OperatorField L(2, std::move(entries));
  Rng rng(102);
  for (int trial = 0; trial < 50; ++trial) {
    PhasePoint x(1);
    x.q(0) = rng.uniform(-2.0, 2.0);
    x.p(0) = rng.uniform(-2.0, 2.0);
    const Rank12Tensor T = nijenhuis_torsion(L, x);
    out.bound(std::abs(T(1, 0, 1) + 1.0), 1e-12, "torsion component (2,1,2)");
    out.bound(std::abs(T(1, 1, 0) - 1.0), 1e-12, "torsion antisymmetry partner");
    double rest = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          if (!(i == 1 && j != k)) rest = std::max(rest, std::abs(T(i, j, k)));
    out.bound(rest, 1e-12, "spurious torsion component");
    out.bound(haantjes_tensor(L, x).max_abs(), 1e-12, "planar operator flatness");
  }
  return out;
}

Outcome criterion_random_chains() {
  Outcome out;
  Rng rng(103);
  for (int system = 0; system < 20 && out.pass; ++system) {
    const StackelMatrix S = random_matrix(3, rng);
    std::vector<Expression> f;
    for (int k = 0; k < 3; ++k) {
      const Expression kinetic =
          system % 4 == 3 ? cos(Expression::p(k))
                          : Expression::p(k) * Expression::p(k) / Expression::number(2);
      f.push_back(kinetic + random_polynomial(k, 3, rng));
    }
    const StackelSystem sys(S, std::move(f));
    const auto pts = sample_separable(S, 50, rng);
    out.require(pts.size() == 50, "sampling exhausted for a random system");
    if (!out.pass) break;

    StructureCheckOptions opt;
    opt.tol = 1e-8;
    opt.seed = 17 + static_cast<std::uint64_t>(system);
    const VerificationReport rep = verify_structure(sys.structure(), pts, opt);
    for (const auto& r : rep.records())
      out.require(r.pass, "axiom " + r.id + " on system " + std::to_string(system));

    const auto chain = verify_lenard_chain(sys.structure(), sys.chain(), pts);
    for (std::size_t j = 1; j < chain.size(); ++j)
      out.bound(chain[j], 1e-8, "chain member " + std::to_string(j + 1));

    const auto& h = sys.hamiltonian_expressions();
    for (const auto& x : pts)
      for (std::size_t i = 0; i < h.size(); ++i)
        for (std::size_t j = i + 1; j < h.size(); ++j) {
          const BracketValue b = poisson_bracket(h[i], h[j], x);
          out.bound(b.normalized(), 1e-9, "bracket");
          double tmax = 0.0;
          for (double t : separable_involution_terms(h[i], h[j], x))
            tmax = std::max(tmax, std::abs(t));
          out.bound(tmax / std::max(1.0, b.scale), 1e-9, "separable bracket term");
        }
  }
  return out;
}

Outcome criterion_rescaling() {
  Outcome out;
  Rng rng(104);
  for (int system = 0; system < 5 && out.pass; ++system) {
    const int n = 3;
    const StackelMatrix S = random_matrix(n, rng);
    std::vector<Expression> scales;
    for (int r = 0; r < n; ++r)
      scales.push_back(r % 2 == 0
                           ? Expression::number(1.0) + Expression::q(r) * Expression::q(r)
                           : Expression::number(2.0));
    std::vector<Expression> rescaled;
    for (int r = 0; r < n; ++r)
      for (int j = 0; j < n; ++j)
        rescaled.push_back(scales[static_cast<std::size_t>(r)] * S.entry(r, j));

    std::vector<Expression> f;
    for (int k = 0; k < n; ++k)
      f.push_back(Expression::p(k) * Expression::p(k) / Expression::number(2) +
                  random_polynomial(k, 2, rng));
    const StackelSystem a(S, f);
    const StackelSystem b(StackelMatrix(n, std::move(rescaled)), f);

    for (const auto& x : sample_separable(S, 50, rng)) {
      for (std::size_t k = 1; k < a.operators().size(); ++k) {
        const Eigen::MatrixXd da = a.operators()[k].value(x);
        const Eigen::MatrixXd db = b.operators()[k].value(x);
        out.bound((da - db).cwiseAbs().maxCoeff() / (1.0 + da.cwiseAbs().maxCoeff()), 1e-12,
                  "rescaled operator K" + std::to_string(k));
      }
    }
  }
  return out;
}

Outcome criterion_projectors() {
  Outcome out;
  Rng rng(105);

  for (int n = 2; n <= 5; ++n) {
    GeneratorSpec gen;
    for (int i = 0; i < n; ++i) gen.lambda.push_back(Expression::q(i));
    for (int trial = 0; trial < 20; ++trial) {
      const PhasePoint x = lattice_point(n, rng);
      const auto projectors = interpolation_projectors(gen, x);
      Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(2 * n, 2 * n);
      for (int r = 0; r < n; ++r) {
        const Eigen::MatrixXd& P = projectors[static_cast<std::size_t>(r)];
        sum += P;
        Eigen::MatrixXd plane = Eigen::MatrixXd::Zero(2 * n, 2 * n);
        plane(r, r) = 1.0;
        plane(n + r, n + r) = 1.0;
        out.bound((P - plane).cwiseAbs().maxCoeff(), 1e-12, "coordinate-plane projector");
        out.bound((P * P - P).cwiseAbs().maxCoeff(), 1e-12, "projector idempotence");
        for (int s = 0; s < r; ++s)
          out.bound((P * projectors[static_cast<std::size_t>(s)]).cwiseAbs().maxCoeff(), 1e-12,
                    "projector orthogonality");
      }
      out.bound((sum - Eigen::MatrixXd::Identity(2 * n, 2 * n)).cwiseAbs().maxCoeff(), 1e-12,
                "partition of unity");
    }

    for (int trial = 0; trial < 25; ++trial) {
      Eigen::VectorXd lambda(n);
      for (int i = 0; i < n; ++i)
        lambda(i) = static_cast<double>(i) - 0.5 * (n - 1) + rng.uniform(-0.15, 0.15);
      const Eigen::MatrixXd V = reverse_vandermonde(lambda);
      const Eigen::MatrixXd Vi = reverse_vandermonde_inverse(lambda);
      const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
      out.bound((Vi * V - I).cwiseAbs().maxCoeff(), 1e-12, "inverse times matrix");
      out.bound((V * Vi - I).cwiseAbs().maxCoeff(), 1e-12, "matrix times inverse");
    }
  }

  // coefficient expansions of random separable families in their generator
  Rng srng(106);
  GeneratorSpec gen3;
  for (int i = 0; i < 3; ++i) gen3.lambda.push_back(Expression::q(i));
  for (int system = 0; system < 5 && out.pass; ++system) {
    const StackelMatrix S = random_matrix(3, srng);
    std::vector<Expression> f;
    for (int k = 0; k < 3; ++k)
      f.push_back(Expression::p(k) * Expression::p(k) / Expression::number(2) +
                  random_polynomial(k, 2, srng));
    const StackelSystem sys(S, std::move(f));
    int used = 0;
    for (int trial = 0; trial < 40 && used < 10; ++trial) {
      const PhasePoint x = lattice_point(3, srng);
      Eigen::VectorXd q(3);
      for (int i = 0; i < 3; ++i) q(i) = x.q(i);
      try {
        const auto cof = S.cofactors(q);
        if (std::abs(cof.det) < 0.1) continue;
        bool ok = true;
        for (int r = 0; r < 3; ++r)
          if (std::abs(cof.adj(0, r)) < 0.05) ok = false;
        if (!ok) continue;
      } catch (const InvalidModel&) {
        continue;
      }
      ++used;
      const BasisCoefficients bc = basis_coefficients(sys, gen3, x);
      out.bound(bc.max_cyclic_residual, 1e-10, "cyclic reconstruction");
      out.bound(bc.max_control_residual, 1e-10, "control reconstruction");
      out.bound(bc.partition_residual, 1e-12, "projector partition");
      out.bound(bc.eigen_transition_residual, 1e-10, "transition eigenvalues");
    }
    out.require(used > 0, "no conditioned points for basis expansion");
  }
  return out;
}

Outcome criterion_control_basis() {
  Outcome out;
  Rng rng(107);
  for (int n = 2; n <= 5; ++n) {
    std::vector<Expression> lambda, f;
    for (int i = 0; i < n; ++i) {
      lambda.push_back(Expression::q(i));
      f.push_back(Expression::p(i) * Expression::p(i) / Expression::number(2) +
                  random_polynomial(i, 3, rng));
    }
    const QbhSystem sys(std::move(lambda), std::move(f));
    const auto pts = spread_points(n, 50, rng, 0.3, -2.0, 2.0);
    out.require(pts.size() == 50, "sampling exhausted");
    for (const auto& x : pts)
      out.bound(sys.control_identity_residual(x), 1e-10,
                "control identity at n=" + std::to_string(n));
  }
  return out;
}

Outcome criterion_goldfish() {
  Outcome out;
  Rng rng(108);

  for (int n = 2; n <= 6; ++n) {
    const auto pts = spread_points(n, 100, rng, 0.3, -1.0, 1.0);
    out.require(pts.size() == 100, "sampling exhausted");
    for (const auto& x : pts) {
      Eigen::VectorXd q(n);
      for (int i = 0; i < n; ++i) q(i) = x.q(i);
      out.bound(jacobi_identity_residual(q), 1e-10,
                "interpolation identity at n=" + std::to_string(n));
    }
  }

  for (const GoldfishModel gm : {GoldfishModel{3, 1.0, 0.4}, GoldfishModel{4, 0.7, -0.2}}) {
    const QbhSystem sys = goldfish_system(gm);
    const auto& h = sys.hamiltonians();
    for (const auto& x : spread_points(gm.n, 100, rng, 0.3, -1.0, 1.0))
      for (std::size_t i = 0; i < h.size(); ++i)
        for (std::size_t j = i + 1; j < h.size(); ++j)
          out.bound(poisson_bracket(h[i], h[j], x).normalized(), 1e-9, "chain involution");
  }

  const GoldfishModel gm{3, 1.0, 0.4};
  for (const auto& x : spread_points(3, 20, rng, 0.4, -1.0, 1.0))
    out.bound(goldfish_newton_residual(gm, x).maxCoeff(), 1e-6, "second-order flow");
  return out;
}

Outcome criterion_killing() {
  Outcome out;
  Rng rng(109);
  for (int system = 0; system < 10 && out.pass; ++system) {
    const StackelMatrix S = random_matrix(3, rng);
    const auto tensors = stackel_killing_tensors(S);
    const auto pts = sample_separable(S, 50, rng);
    out.require(pts.size() == 50, "sampling exhausted");
    for (const auto& x : pts)
      for (std::size_t i = 0; i < tensors.size(); ++i)
        for (std::size_t j = i + 1; j < tensors.size(); ++j)
          out.bound(killing_residual(tensors[i], tensors[j], x), 1e-9,
                    "tensor pair " + std::to_string(i) + "," + std::to_string(j) + " on system " +
                        std::to_string(system));
  }
  return out;
}

Outcome criterion_conformal() {
  Outcome out;
  Rng rng(110);

  for (int n = 2; n <= 4; ++n) {
    std::vector<Expression> lambda, diag(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
      lambda.push_back(Expression::q(i));
      diag[static_cast<std::size_t>(i) * n + i] = Expression::q(i);
    }
    const OperatorField L(n, std::move(diag));
    const auto closed = benenti_tower_diagonal(lambda);
    for (const auto& x : spread_points(n, 50, rng, 0.3, -2.0, 2.0)) {
      const auto tower = benenti_tower_values(L, x);
      for (std::size_t a = 0; a < tower.size(); ++a)
        out.bound((tower[a] - closed[a].value(x)).cwiseAbs().maxCoeff() /
                      (1.0 + tower[a].cwiseAbs().maxCoeff()),
                  1e-10, "tower member " + std::to_string(a));
    }
  }

  for (int n = 2; n <= 3; ++n) {
    std::vector<Expression> diag(static_cast<std::size_t>(n) * n);
    DiagonalMetric G;
    for (int i = 0; i < n; ++i) {
      diag[static_cast<std::size_t>(i) * n + i] = Expression::q(i);
      Expression denom = Expression::number(1.0);
      for (int j = 0; j < n; ++j)
        if (j != i) denom = denom * (Expression::q(i) - Expression::q(j));
      G.g.push_back(Expression::number(1.0) / denom);
    }
    const OperatorField L(n, std::move(diag));
    for (const auto& x : spread_points(n, 50, rng, 0.3, -2.0, 2.0))
      out.bound(l_tensor_residual(L, G, x), 1e-9, "metric condition at n=" + std::to_string(n));
  }

  // kinetic/potential split of the chain
  Rng srng(111);
  for (int system = 0; system < 5 && out.pass; ++system) {
    const StackelMatrix S = random_matrix(3, srng);
    std::vector<Expression> psi, w, f;
    for (int k = 0; k < 3; ++k) {
      psi.push_back(Expression::p(k) * Expression::p(k) / Expression::number(2));
      w.push_back(random_polynomial(k, 3, srng));
      f.push_back(psi.back() + w.back());
    }
    const StackelSystem sys(S, f);
    const PotentialChain pc = potential_chain(S, psi, w);
    const auto pts = sample_separable(S, 50, srng);
    out.require(pts.size() == 50, "sampling exhausted");

    const auto tk = verify_lenard_chain(sys.structure(), ChainSpec{pc.kinetic}, pts);
    const auto tv = verify_lenard_chain(sys.structure(), ChainSpec{pc.potential}, pts);
    for (std::size_t j = 1; j < tk.size(); ++j) {
      out.bound(tk[j], 1e-9, "kinetic chain member");
      out.bound(tv[j], 1e-9, "potential chain member");
    }

    const auto& h = sys.hamiltonian_expressions();
    for (const auto& x : pts)
      for (int j = 0; j < 3; ++j) {
        const double split = pc.kinetic[static_cast<std::size_t>(j)].eval(x) +
                             pc.potential[static_cast<std::size_t>(j)].eval(x);
        const double full = h[static_cast<std::size_t>(j)].eval(x);
        out.bound(std::abs(split - full) / (1.0 + std::abs(full)), 1e-11, "split sum");
      }

    for (const auto& x : pts)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          if (i == j) continue;
          const BracketValue tvb = poisson_bracket(pc.kinetic[static_cast<std::size_t>(i)],
                                                   pc.potential[static_cast<std::size_t>(j)], x);
          const BracketValue vtb = poisson_bracket(pc.potential[static_cast<std::size_t>(i)],
                                                   pc.kinetic[static_cast<std::size_t>(j)], x);
          out.bound(std::abs(tvb.value + vtb.value) /
                        std::max(1.0, std::max(tvb.scale, vtb.scale)),
                    1e-9, "mixed bracket");
        }
  }
  return out;
}

Outcome criterion_calogero() {
  Outcome out;
  const Model m = load_builtin("calogero3");
  VerifyOptions opt;
  opt.samples = 100;
  opt.seed = 11;
  const VerificationReport rep = run_verification(m, opt);

  for (const auto& r : rep.records())
    if (r.asserted) out.require(r.pass, r.id + " failed");

  const auto need = [&](const std::string& id, double tol) {
    const CheckRecord* r = find_record(rep, id);
    if (r == nullptr) {
      out.require(false, "missing record " + id);
      return;
    }
    out.bound(r->residual, tol, id);
  };

  need("chain.H2", 1e-8);
  for (const std::string wn : {"Hcyl", "Hsph", "Hpar"}) need("chain." + wn, 1e-8);
  for (const std::string web : {"cylindrical", "spherical", "parabolic"}) {
    for (int k = 0; k < 3; ++k)
      need("structure." + web + ".haantjes.K" + std::to_string(k), 1e-8);
    need("structure." + web + ".commute.K1.K2", 1e-10);
    need("structure." + web + ".module", 1e-8);
  }
  need("involution.H3.H", 1e-8);
  need("involution.cross.H3.H2", 1e-8);
  for (const std::string name : {"shared", "cylindrical", "spherical", "parabolic"})
    need("killing.projected." + name, 1e-9);
  need("momentum.H", 1e-10);

  for (const std::string id :
       {"independence.family", "independence.sub.H.H2.Hcyl.Hsph",
        "independence.sub.H.H2.Hcyl.Hpar", "independence.sub.H.H2.Hsph.Hpar"}) {
    const CheckRecord* r = find_record(rep, id);
    if (r == nullptr) {
      out.require(false, "missing record " + id);
      continue;
    }
    out.require(r->residual == 0.0 && r->samples > 0, id + " rank drifted");
  }
  return out;
}

Outcome criterion_cli(const std::string& cli) {
  Outcome out;
  if (cli.empty()) {
    out.require(false, "no CLI path supplied");
    return out;
  }
  const std::string cmd =
      cli + " verify builtin:calogero3 --suite all --seed 7 --format machine 2>/dev/null";

  const auto run = [&](std::string& text) -> int {
    text.clear();
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) return -1;
    char buf[4096];
    size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) text.append(buf, got);
    const int status = pclose(pipe);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };

  std::string first, second;
  const int code1 = run(first);
  const int code2 = run(second);
  out.require(code1 == 0, "first run exited with " + std::to_string(code1));
  out.require(code2 == 0, "second run exited with " + std::to_string(code2));
  out.require(first == second, "outputs differ between identical runs");
  out.require(!first.empty(), "no output captured");

  int records = 0;
  bool summary_ok = false;
  std::istringstream lines(first);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.rfind("id=", 0) == 0) {
      ++records;
      const bool asserted = line.find("asserted=1") != std::string::npos;
      const bool passed = line.find("pass=1") != std::string::npos;
      if (asserted && !passed) out.require(false, "failing check: " + line);
    } else if (line.rfind("summary ", 0) == 0) {
      summary_ok = line.find("pass=1") != std::string::npos;
    }
  }
  out.require(records >= 12, "only " + std::to_string(records) + " records");
  out.require(summary_ok, "summary line missing or failing");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";

  struct Entry {
    int id;
    const char* desc;
    std::function<Outcome()> run;
  };
  const std::vector<Entry> entries = {
      {1, "gradient evaluation matches central finite differences",
       [] { return criterion_gradients(); }},
      {2, "torsion and flatness components of the companion operator",
       [] { return criterion_companion(); }},
      {3, "random separable chains satisfy the structure axioms",
       [] { return criterion_random_chains(); }},
      {4, "operator family is invariant under row rescaling", [] { return criterion_rescaling(); }},
      {5, "interpolation projectors and basis reconstructions",
       [] { return criterion_projectors(); }},
      {6, "operator family equals the control basis of its generator",
       [] { return criterion_control_basis(); }},
      {7, "interacting-particle chain: identity, involution, and flow",
       [] { return criterion_goldfish(); }},
      {8, "separation tensors satisfy the Killing conditions", [] { return criterion_killing(); }},
      {9, "conformal tower, metric condition, and potential split",
       [] { return criterion_conformal(); }},
      {10, "three-particle inverse-square battery", [] { return criterion_calogero(); }},
      {11, "command-line verifier is deterministic and passes",
       [&] { return criterion_cli(cli); }},
  };

  int failed = 0;
  for (const auto& entry : entries) {
    Outcome out;
    try {
      out = entry.run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %d: %s%s%s\n", out.pass ? "PASS" : "FAIL", entry.id, entry.desc,
                out.detail.empty() ? "" : " -- ", out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failed;
  }
  if (failed > 0) std::printf("%d of %zu criteria failed\n", failed, entries.size());
  return failed == 0 ? 0 : 1;
}
