#include "haantjes/calogero.hpp"

#include <cmath>
#include <utility>

namespace haantjes {

namespace {

Expression sq(const Expression& e) { return e * e; }

// Assembles [[A, 0], [B, A]] on the 6-dimensional phase space from row-major
// 3x3 blocks.
OperatorField block_operator(const std::vector<Expression>& A, const std::vector<Expression>& B) {
  std::vector<Expression> e(36);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      e[static_cast<std::size_t>(i) * 6 + j] = A[static_cast<std::size_t>(i) * 3 + j];
      e[static_cast<std::size_t>(i + 3) * 6 + j] = B[static_cast<std::size_t>(i) * 3 + j];
      e[static_cast<std::size_t>(i + 3) * 6 + (j + 3)] = A[static_cast<std::size_t>(i) * 3 + j];
    }
  }
  return OperatorField(6, std::move(e));
}

struct Parts {
  Expression x, y, z, px, py, pz;
  Expression a;          // coupling as a named constant
  Expression potential;  // a / (x-y)^2 + a / (y-z)^2 + a / (z-x)^2
};

Parts make_parts(double coupling) {
  Parts c{Expression::q(0), Expression::q(1), Expression::q(2),
          Expression::p(0), Expression::p(1), Expression::p(2),
          Expression::parameter("a", coupling), Expression()};
  c.potential =
      c.a / sq(c.x - c.y) + c.a / sq(c.y - c.z) + c.a / sq(c.z - c.x);
  return c;
}

Expression hamiltonian_expr(const Parts& c) {
  return Expression::number(0.5) * (sq(c.px) + sq(c.py) + sq(c.pz)) + c.potential;
}

Expression axial_expr(const Parts& c) {
  Expression lu = (c.y * c.pz - c.z * c.py) + (c.z * c.px - c.x * c.pz) + (c.x * c.py - c.y * c.px);
  Expression spread = sq(c.x - c.y) + sq(c.x - c.z) + sq(c.y - c.z);
  return Expression::number(1.0 / 6.0) * sq(lu) +
         Expression::number(1.0 / 3.0) * spread * c.potential;
}

Expression cylindrical_expr(const Parts& c) {
  return Expression::number(0.5) * sq(c.px + c.py + c.pz);
}

Expression spherical_expr(const Parts& c) {
  Expression l1 = c.y * c.pz - c.z * c.py;
  Expression l2 = c.z * c.px - c.x * c.pz;
  Expression l3 = c.x * c.py - c.y * c.px;
  return Expression::number(0.5) * (sq(l1) + sq(l2) + sq(l3)) +
         (sq(c.x) + sq(c.y) + sq(c.z)) * c.potential;
}

Expression parabolic_expr(const Parts& c) {
  Expression axial = c.px + c.py + c.pz;
  Expression radial = c.x * c.px + c.y * c.py + c.z * c.pz;
  Expression height = c.x + c.y + c.z;
  return Expression::number(0.5) *
             (axial * radial - height * (sq(c.px) + sq(c.py) + sq(c.pz))) -
         height * c.potential;
}

Expression cubic_expr(const Parts& c) {
  return Expression::number(1.0 / 3.0) * (pow(c.px, 3.0) + pow(c.py, 3.0) + pow(c.pz, 3.0)) +
         c.a * ((c.px + c.py) / sq(c.x - c.y) + (c.px + c.pz) / sq(c.x - c.z) +
                (c.py + c.pz) / sq(c.y - c.z));
}

OperatorField shared_op(const Parts& c) {
  Expression third = Expression::number(1.0 / 3.0);
  Expression v[3] = {c.y - c.z, c.z - c.x, c.x - c.y};
  std::vector<Expression> A(9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) A[static_cast<std::size_t>(i) * 3 + j] = third * v[i] * v[j];
  Expression twist =
      third * ((c.x - c.y) * c.pz + (c.y - c.z) * c.px + (c.z - c.x) * c.py);
  Expression zero;
  std::vector<Expression> B = {zero,   twist, -twist,
                               -twist, zero,  twist,
                               twist,  -twist, zero};
  return block_operator(A, B);
}

OperatorField cylindrical_op() {
  Expression one = Expression::number(1.0);
  std::vector<Expression> A(9, one);
  std::vector<Expression> B(9);
  return block_operator(A, B);
}

OperatorField spherical_op(const Parts& c) {
  std::vector<Expression> A = {sq(c.y) + sq(c.z), -(c.x * c.y),      -(c.z * c.x),
                               -(c.x * c.y),      sq(c.x) + sq(c.z), -(c.y * c.z),
                               -(c.z * c.x),      -(c.y * c.z),      sq(c.x) + sq(c.y)};
  Expression b12 = c.y * c.px - c.x * c.py;
  Expression b13 = c.z * c.px - c.x * c.pz;
  Expression b23 = c.z * c.py - c.y * c.pz;
  Expression zero;
  std::vector<Expression> B = {zero, b12,  b13,
                               -b12, zero, b23,
                               -b13, -b23, zero};
  return block_operator(A, B);
}

OperatorField parabolic_op(const Parts& c) {
  Expression half = Expression::number(0.5);
  std::vector<Expression> A = {
      half * Expression::number(-2.0) * (c.y + c.z), half * (c.x + c.y), half * (c.x + c.z),
      half * (c.x + c.y), half * Expression::number(-2.0) * (c.x + c.z), half * (c.y + c.z),
      half * (c.x + c.z), half * (c.y + c.z), half * Expression::number(-2.0) * (c.x + c.y)};
  Expression b12 = half * (c.py - c.px);
  Expression b13 = half * (c.pz - c.px);
  Expression b23 = half * (c.pz - c.py);
  Expression zero;
  std::vector<Expression> B = {zero, b12,  b13,
                               -b12, zero, b23,
                               -b13, -b23, zero};
  return block_operator(A, B);
}

}  // namespace

CalogeroModel::CalogeroModel(double coupling)
    : a_(coupling),
      k1_(OperatorField::identity(6)),
      kcyl_(OperatorField::identity(6)),
      ksph_(OperatorField::identity(6)),
      kpar_(OperatorField::identity(6)) {
  Parts c = make_parts(coupling);
  h_ = hamiltonian_expr(c);
  pot_ = c.potential;
  h2_ = axial_expr(c);
  h3_ = cubic_expr(c);
  hcyl_ = cylindrical_expr(c);
  hsph_ = spherical_expr(c);
  hpar_ = parabolic_expr(c);
  momentum_ = c.px + c.py + c.pz;
  k1_ = shared_op(c);
  kcyl_ = cylindrical_op();
  ksph_ = spherical_op(c);
  kpar_ = parabolic_op(c);
}

const std::vector<std::string>& CalogeroModel::webs() {
  static const std::vector<std::string> names = {"cylindrical", "spherical", "parabolic"};
  return names;
}

const Expression& CalogeroModel::web_integral(const std::string& web) const {
  if (web == "cylindrical") return hcyl_;
  if (web == "spherical") return hsph_;
  if (web == "parabolic") return hpar_;
  throw InvalidModel("unknown web \"" + web + "\"");
}

const OperatorField& CalogeroModel::op_by_name(const std::string& name) const {
  if (name == "shared") return k1_;
  if (name == "cylindrical") return kcyl_;
  if (name == "spherical") return ksph_;
  if (name == "parabolic") return kpar_;
  throw InvalidModel("unknown operator \"" + name + "\"");
}

const OperatorField& CalogeroModel::web_operator(const std::string& web) const {
  if (web == "shared") throw InvalidModel("\"shared\" is not a web name");
  return op_by_name(web);
}

HaantjesStructure CalogeroModel::web_structure(const std::string& web) const {
  return HaantjesStructure(3, {OperatorField::identity(6), k1_, web_operator(web)});
}

ChainSpec CalogeroModel::web_chain(const std::string& web) const {
  return ChainSpec{{h_, h2_, web_integral(web)}};
}

std::vector<Expression> CalogeroModel::integral_family() const {
  return {h_, h2_, hcyl_, hsph_, hpar_};
}

std::vector<std::string> CalogeroModel::integral_names() const {
  return {"H", "H2", "Hcyl", "Hsph", "Hpar"};
}

std::vector<Expression> CalogeroModel::projected_block(const std::string& name) const {
  const OperatorField& K = op_by_name(name);
  std::vector<Expression> A(9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) A[static_cast<std::size_t>(i) * 3 + j] = K.entry(i, j);
  return A;
}

bool CalogeroModel::admissible(const PhasePoint& x, double margin) const {
  if (x.n() != 3) return false;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (std::abs(x.q(i) - x.q(j)) <= margin) return false;
  return true;
}

PhasePoint CalogeroModel::make_point(double x, double y, double z, double px, double py,
                                     double pz) {
  return PhasePoint({x, y, z}, {px, py, pz});
}

}  // namespace haantjes
