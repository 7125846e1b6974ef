#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "haantjes/brackets.hpp"
#include "haantjes/qbh.hpp"
#include "haantjes/rng.hpp"

using namespace haantjes;

namespace {

std::vector<PhasePoint> spread_points(int n, int count, std::uint64_t seed, double gap = 0.3,
                                      double pbox = 2.0) {
  Rng rng(seed);
  std::vector<PhasePoint> pts;
  while (static_cast<int>(pts.size()) < count) {
    PhasePoint x(n);
    for (int i = 0; i < n; ++i) x.q(i) = rng.uniform(-2.0, 2.0);
    for (int i = 0; i < n; ++i) x.p(i) = rng.uniform(-pbox, pbox);
    bool ok = true;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (std::abs(x.q(i) - x.q(j)) < gap) ok = false;
    if (ok) pts.push_back(x);
  }
  return pts;
}

Eigen::VectorXd char_coefficients_numeric(const Eigen::VectorXd& lambda) {
  const Eigen::VectorXd sigma = elementary_symmetric(lambda);
  Eigen::VectorXd c(lambda.size());
  for (int k = 1; k <= lambda.size(); ++k) c(k - 1) = ((k % 2 == 1) ? 1.0 : -1.0) * sigma(k - 1);
  return c;
}

QbhSystem cubic_system(int n) {
  std::vector<Expression> lambda, f;
  for (int i = 0; i < n; ++i) {
    lambda.push_back(Expression::q(i));
    f.push_back(Expression::p(i) * Expression::p(i) / Expression::number(2) +
                pow(Expression::q(i), 3.0));
  }
  return QbhSystem(std::move(lambda), std::move(f));
}

}  // namespace

TEST_CASE("elementary symmetric polynomials") {
  Eigen::VectorXd xs(3);
  xs << 1, 2, 3;
  const Eigen::VectorXd sigma = elementary_symmetric(xs);
  CHECK(sigma(0) == doctest::Approx(6.0));
  CHECK(sigma(1) == doctest::Approx(11.0));
  CHECK(sigma(2) == doctest::Approx(6.0));

  std::vector<Expression> exprs = {Expression::q(0), Expression::q(1), Expression::q(2)};
  const auto sym = elementary_symmetric(exprs);
  PhasePoint x({1.0, 2.0, 3.0}, {0.0, 0.0, 0.0});
  for (int k = 0; k < 3; ++k)
    CHECK(sym[static_cast<std::size_t>(k)].eval(x) == doctest::Approx(sigma(k)));
}

TEST_CASE("characteristic coefficient partials against finite differences") {
  Rng rng(71);
  for (int n : {2, 3, 5}) {
    std::vector<Expression> lambda;
    for (int i = 0; i < n; ++i) lambda.push_back(Expression::q(i));
    PhasePoint x(n);
    for (int i = 0; i < n; ++i) x.q(i) = rng.uniform(-2.0, 2.0);
    Eigen::VectorXd l(n);
    for (int i = 0; i < n; ++i) l(i) = x.q(i);

    const double h = 1e-6;
    for (int k = 1; k <= n; ++k)
      for (int r = 0; r < n; ++r) {
        const double val = char_coefficient_partial(lambda, k, r).eval(x);
        Eigen::VectorXd lp = l, lm = l;
        lp(r) += h;
        lm(r) -= h;
        const double fd =
            (char_coefficients_numeric(lp)(k - 1) - char_coefficients_numeric(lm)(k - 1)) /
            (2 * h);
        CHECK(val == doctest::Approx(fd).epsilon(1e-7));
      }
  }
  std::vector<Expression> two = {Expression::q(0), Expression::q(1)};
  CHECK_THROWS_AS(char_coefficient_partial(two, 3, 0), InvalidModel);
  CHECK_THROWS_AS(char_coefficient_partial(two, 0, 0), InvalidModel);
}

TEST_CASE("reverse Vandermonde frozen values and inverse orientation") {
  Eigen::VectorXd l(2);
  l << 1, 2;
  const Eigen::MatrixXd V = reverse_vandermonde(l);
  CHECK(V(0, 0) == doctest::Approx(1.0));
  CHECK(V(0, 1) == doctest::Approx(1.0));
  CHECK(V(1, 0) == doctest::Approx(2.0));
  CHECK(V(1, 1) == doctest::Approx(1.0));

  const Eigen::MatrixXd Vi = reverse_vandermonde_inverse(l);
  CHECK(Vi(0, 0) == doctest::Approx(-1.0));
  CHECK(Vi(0, 1) == doctest::Approx(1.0));
  CHECK(Vi(1, 0) == doctest::Approx(2.0));
  CHECK(Vi(1, 1) == doctest::Approx(-1.0));

  Rng rng(72);
  for (int n = 2; n <= 5; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXd lam(n);
      for (int i = 0; i < n; ++i) lam(i) = rng.uniform(-2.0, 2.0) + 0.7 * i;
      const Eigen::MatrixXd A = reverse_vandermonde(lam);
      const Eigen::MatrixXd B = reverse_vandermonde_inverse(lam);
      const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
      CHECK((B * A - I).cwiseAbs().maxCoeff() <= 1e-10);
      CHECK((A * B - I).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }

  Eigen::VectorXd collide(2);
  collide << 1, 1;
  CHECK_THROWS_AS(reverse_vandermonde_inverse(collide), DomainError);
}

TEST_CASE("closed form chain matches the matrix route") {
  for (int n : {2, 3, 4}) {
    const QbhSystem sys = cubic_system(n);
    const StackelSystem st = sys.build_stackel();
    const auto pts = spread_points(n, 10, 73);
    for (const auto& x : pts) {
      for (int j = 0; j < n; ++j) {
        const double a = sys.hamiltonians()[static_cast<std::size_t>(j)].eval(x);
        const double b = st.hamiltonian_expressions()[static_cast<std::size_t>(j)].eval(x);
        CHECK(std::abs(a - b) / (1.0 + std::abs(a)) <= 1e-10);
      }
      for (std::size_t k = 0; k < sys.operators().size(); ++k) {
        const Eigen::MatrixXd da = sys.operators()[k].value(x);
        const Eigen::MatrixXd db = st.operators()[k].value(x);
        CHECK((da - db).cwiseAbs().maxCoeff() / (1.0 + da.cwiseAbs().maxCoeff()) <= 1e-10);
      }
    }
  }
}

TEST_CASE("operator family is the control basis of the generator") {
  for (int n : {2, 3, 4, 5}) {
    const QbhSystem sys = cubic_system(n);
    for (const auto& x : spread_points(n, 15, 74))
      CHECK(sys.control_identity_residual(x) <= 1e-10);
  }
}

TEST_CASE("qbh chain passes structure and involution checks") {
  const QbhSystem sys = cubic_system(3);
  const auto pts = spread_points(3, 15, 75);
  StructureCheckOptions opt;
  const VerificationReport report = verify_structure(sys.structure(), pts, opt);
  CHECK(report.all_passed());
  const auto residuals = verify_lenard_chain(sys.structure(), sys.chain(), pts);
  for (std::size_t j = 1; j < residuals.size(); ++j) CHECK(residuals[j] <= 1e-9);
  for (const auto& x : pts)
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        const BracketValue b = poisson_bracket(sys.hamiltonians()[static_cast<std::size_t>(i)],
                                               sys.hamiltonians()[static_cast<std::size_t>(j)], x);
        CHECK(b.normalized() <= 1e-11);
      }
}

TEST_CASE("separation coordinates are validated") {
  CHECK_THROWS_AS(QbhSystem({Expression::q(1), Expression::q(1)},
                            {Expression::p(0), Expression::p(1)}),
                  InvalidModel);
  CHECK_THROWS_AS(QbhSystem({Expression::q(0), Expression::q(1)},
                            {Expression::p(1), Expression::p(1)}),
                  InvalidModel);
  CHECK_THROWS_AS(QbhSystem({Expression::p(0), Expression::q(1)},
                            {Expression::p(0), Expression::p(1)}),
                  InvalidModel);
}

TEST_CASE("goldfish frozen point") {
  GoldfishModel m;
  m.n = 2;
  m.a = 1.0;
  m.b = 0.0;
  PhasePoint x({2.0, 1.0}, {0.0, 0.0});
  CHECK(goldfish_hamiltonian(m, x) == doctest::Approx(0.0));

  // velocities dH/dp = (1, -1)
  const DualValue d = goldfish_hamiltonian_expression(m).eval_dual(x);
  CHECK(d.gradient[2] == doctest::Approx(1.0));
  CHECK(d.gradient[3] == doctest::Approx(-1.0));
}

TEST_CASE("goldfish hamiltonian equals the first chain member") {
  GoldfishModel m;
  m.n = 3;
  m.a = 0.8;
  m.b = 0.5;
  const QbhSystem sys = goldfish_system(m);
  for (const auto& x : spread_points(3, 20, 76, 0.3, 1.0)) {
    const double direct = goldfish_hamiltonian(m, x);
    const double chain = sys.hamiltonians()[0].eval(x);
    CHECK(std::abs(direct - chain) / (1.0 + std::abs(direct)) <= 1e-11);
  }
}

TEST_CASE("interpolation identity behind the goldfish reduction") {
  Rng rng(77);
  for (int n = 2; n <= 6; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::VectorXd q(n);
      for (int i = 0; i < n; ++i) q(i) = rng.uniform(-2.0, 2.0) + 0.5 * i;
      CHECK(jacobi_identity_residual(q) <= 1e-12);
    }
  }
  Eigen::VectorXd collide(3);
  collide << 1, 1, 2;
  CHECK_THROWS_AS(jacobi_identity_residual(collide), DomainError);
}

TEST_CASE("newton form of the goldfish flow") {
  GoldfishModel m;
  m.n = 3;
  m.a = 1.0;
  m.b = 0.4;
  for (const auto& x : spread_points(3, 10, 78, 0.4, 1.0)) {
    const Eigen::VectorXd res = goldfish_newton_residual(m, x);
    CHECK(res.maxCoeff() <= 1e-6);
  }
}

TEST_CASE("goldfish involution") {
  GoldfishModel m;
  m.n = 4;
  m.a = 0.6;
  m.b = -0.3;
  const QbhSystem sys = goldfish_system(m);
  for (const auto& x : spread_points(4, 10, 79, 0.3, 1.0))
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        const BracketValue b = poisson_bracket(sys.hamiltonians()[static_cast<std::size_t>(i)],
                                               sys.hamiltonians()[static_cast<std::size_t>(j)], x);
        CHECK(b.normalized() <= 1e-10);
      }
}
