#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <vector>

#include "haantjes/rng.hpp"
#include "haantjes/structure.hpp"

using namespace haantjes;

namespace {

std::vector<PhasePoint> random_points(int n, int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<PhasePoint> pts;
  for (int s = 0; s < count; ++s) {
    PhasePoint x(n);
    for (int a = 0; a < 2 * n; ++a) x.coord(a) = rng.uniform(-2.0, 2.0);
    pts.push_back(x);
  }
  return pts;
}

// diag(q1, q2, q1, q2): eigenvalue functions repeated on position and
// momentum slots, diagonal in the coordinate frame
OperatorField diagonal_lift() {
  std::vector<Expression> entries(16);
  entries[0] = Expression::q(0);
  entries[5] = Expression::q(1);
  entries[10] = Expression::q(0);
  entries[15] = Expression::q(1);
  return OperatorField(4, entries);
}

OperatorField constant_lift() {
  std::vector<Expression> entries(16);
  entries[0] = Expression::number(1);
  entries[5] = Expression::number(2);
  entries[10] = Expression::number(1);
  entries[15] = Expression::number(2);
  return OperatorField(4, entries);
}

bool has_record(const VerificationReport& r, const std::string& id) {
  return std::any_of(r.records().begin(), r.records().end(),
                     [&](const CheckRecord& c) { return c.id == id; });
}

}  // namespace

TEST_CASE("structure constructor validates the family") {
  CHECK_THROWS_AS(HaantjesStructure(2, {}), InvalidModel);
  CHECK_THROWS_AS(HaantjesStructure(2, {OperatorField::identity(3)}), InvalidModel);
  CHECK_THROWS_AS(HaantjesStructure(0, {OperatorField::identity(2)}), InvalidModel);
}

TEST_CASE("axiom battery passes on a diagonal family") {
  HaantjesStructure s(2, {OperatorField::identity(4), diagonal_lift()});
  StructureCheckOptions opt;
  opt.seed = 5;
  const VerificationReport report = verify_structure(s, random_points(2, 20, 41), opt);
  CHECK(report.all_passed());
  CHECK(has_record(report, "structure.identity"));
  CHECK(has_record(report, "structure.haantjes.K0"));
  CHECK(has_record(report, "structure.haantjes.K1"));
  CHECK(has_record(report, "structure.compat.K1"));
  CHECK(has_record(report, "structure.module"));
  CHECK(report.records().size() == 5);
  for (const auto& rec : report.records()) CHECK(rec.samples > 0);
}

TEST_CASE("id prefix is configurable") {
  HaantjesStructure s(2, {OperatorField::identity(4), diagonal_lift()});
  StructureCheckOptions opt;
  opt.id_prefix = "web";
  const VerificationReport report = verify_structure(s, random_points(2, 5, 42), opt);
  CHECK(has_record(report, "web.identity"));
  CHECK_FALSE(has_record(report, "structure.identity"));
}

TEST_CASE("axiom battery flags a non Haantjes operator") {
  // kernel distribution spanned by d/dx1, d/dx2 + q1 d/dx3 is not involutive
  std::vector<Expression> entries(16);
  entries[9] = -Expression::q(0);
  entries[10] = Expression::number(1);
  entries[15] = Expression::number(1);
  HaantjesStructure s(2, {OperatorField::identity(4), OperatorField(4, entries)});
  StructureCheckOptions opt;
  const VerificationReport report = verify_structure(s, random_points(2, 10, 43), opt);
  CHECK_FALSE(report.all_passed());
  bool haantjes_failed = false;
  for (const auto& rec : report.records())
    if (rec.id == "structure.haantjes.K1" && !rec.pass) haantjes_failed = true;
  CHECK(haantjes_failed);
}

TEST_CASE("axiom battery flags a family that does not commute") {
  // both members Haantjes and symplectically compatible, but not commuting
  std::vector<Expression> a(16), b(16);
  a[0] = Expression::number(1);
  a[5] = Expression::number(2);
  a[10] = Expression::number(1);
  a[15] = Expression::number(2);
  // symmetric block swap on the q block and its transpose on the p block
  b[1] = Expression::number(1);
  b[4] = Expression::number(1);
  b[11] = Expression::number(1);
  b[14] = Expression::number(1);
  HaantjesStructure s(2, {OperatorField::identity(4), OperatorField(4, a), OperatorField(4, b)});
  StructureCheckOptions opt;
  const VerificationReport report = verify_structure(s, random_points(2, 5, 44), opt);
  bool commute_failed = false;
  for (const auto& rec : report.records())
    if (rec.id == "structure.commute.K1.K2" && !rec.pass) commute_failed = true;
  CHECK(commute_failed);
}

TEST_CASE("lenard chain residuals") {
  HaantjesStructure s(2, {OperatorField::identity(4), constant_lift()});
  // H1 = (p1^2 + p2^2)/2; dH2 = K^T dH1 integrates to H2 = p1^2/2 + p2^2
  Expression H1 = parse_expression("(p1^2 + p2^2)/2", 2);
  Expression H2 = parse_expression("p1^2/2 + p2^2", 2);
  const auto residuals = verify_lenard_chain(s, ChainSpec{{H1, H2}}, random_points(2, 20, 45));
  REQUIRE(residuals.size() == 2);
  CHECK(residuals[0] == 0.0);
  CHECK(residuals[1] <= 1e-14);

  // a wrong chain member must be caught
  Expression bad = parse_expression("p1^2/2 + p2^2 + q1", 2);
  const auto bad_res = verify_lenard_chain(s, ChainSpec{{H1, bad}}, random_points(2, 20, 45));
  CHECK(bad_res[1] > 1e-3);

  CHECK_THROWS_AS(verify_lenard_chain(s, ChainSpec{{H1, H2, H2}}, random_points(2, 2, 46)),
                  InvalidModel);
}

TEST_CASE("eigen analysis of a doubled spectrum") {
  PhasePoint x({2.0, -1.0}, {0.3, 0.4});
  const EigenAnalysis ea = eigen_analysis(diagonal_lift(), x, 1e-8);
  REQUIRE(ea.cluster_values.size() == 2);
  CHECK(ea.cluster_values[0] == doctest::Approx(-1.0));
  CHECK(ea.cluster_values[1] == doctest::Approx(2.0));
  CHECK(ea.multiplicities == std::vector<int>{2, 2});
  CHECK(ea.real);
  CHECK(ea.semisimple);
  CHECK(ea.distinct);
  CHECK(ea.doubled);

  // collapse the gap: eigenvalues coincide, clusters merge
  PhasePoint y({1.0, 1.0}, {0.0, 0.0});
  const EigenAnalysis eb = eigen_analysis(diagonal_lift(), y, 1e-8);
  CHECK(eb.cluster_values.size() == 1);
  CHECK(eb.multiplicities == std::vector<int>{4});
  CHECK(eb.doubled);
}

TEST_CASE("frame integrability") {
  const int dim = 4;
  std::vector<Expression> e0(dim), twisted(dim), e3(dim), parallel(dim);
  e0[0] = Expression::number(1);
  twisted[1] = Expression::number(1);
  twisted[2] = Expression::q(0);
  e3[3] = Expression::number(1);
  parallel[0] = Expression::q(0);

  const auto pts = random_points(2, 15, 47);
  const auto results = check_frame_integrability(
      {VectorField(e0), VectorField(twisted), VectorField(e3)}, pts, 1e-8);
  REQUIRE(results.size() == 3);
  for (const auto& r : results) {
    if (r.i == 0 && r.j == 1) {
      CHECK_FALSE(r.involutive);
    } else {
      CHECK(r.involutive);
    }
    CHECK(r.checked > 0);
  }

  // a pointwise-dependent pair is skipped as degenerate everywhere
  const auto degen = check_frame_integrability({VectorField(e0), VectorField(parallel)}, pts, 1e-8);
  REQUIRE(degen.size() == 1);
  CHECK(degen[0].checked == 0);
  CHECK(degen[0].degenerate == static_cast<int>(pts.size()));
  CHECK(degen[0].involutive);
}
