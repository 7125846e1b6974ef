// Three particles on a line with an inverse-square pair potential.
//
// The model carries five polynomial-plus-rational integrals: the Hamiltonian,
// an axial angular-momentum integral shared by every chain, and one integral
// per separating web (cylindrical, spherical, parabolic), plus a cubic
// integral and the total momentum. Four explicit operator fields, block lower
// triangular [[A, 0], [B, A]] in (q; p) order, tie the integrals to the
// Hamiltonian through transpose chains dF = K^T dH. Only two of the three
// chains are functionally independent: the five integrals span rank 4.
#pragma once

#include <string>
#include <vector>

#include "haantjes/expression.hpp"
#include "haantjes/fields.hpp"
#include "haantjes/structure.hpp"

namespace haantjes {

class CalogeroModel {
 public:
  explicit CalogeroModel(double coupling = 1.0);

  static constexpr int kDof = 3;

  double coupling() const { return a_; }

  // Names of the separating webs, each contributing one operator and one
  // integral: "cylindrical", "spherical", "parabolic".
  static const std::vector<std::string>& webs();

  const Expression& hamiltonian() const { return h_; }
  const Expression& potential() const { return pot_; }
  const Expression& axial_integral() const { return h2_; }
  const Expression& cubic_integral() const { return h3_; }
  const Expression& total_momentum() const { return momentum_; }
  const Expression& web_integral(const std::string& web) const;

  // dH2 = K^T dH holds for this operator; it is the member every web shares.
  const OperatorField& shared_operator() const { return k1_; }
  const OperatorField& web_operator(const std::string& web) const;

  // {I, K_shared, K_web} acting on the chain {H, H2, H_web}.
  HaantjesStructure web_structure(const std::string& web) const;
  ChainSpec web_chain(const std::string& web) const;

  // H, H2, then the web integrals in webs() order; gradients have rank 4.
  std::vector<Expression> integral_family() const;
  std::vector<std::string> integral_names() const;

  // Configuration block of an operator ("shared" or a web name); these 3x3
  // blocks are Killing tensors of the flat metric.
  std::vector<Expression> projected_block(const std::string& name) const;

  // True when all pairwise coordinate separations exceed `margin`.
  bool admissible(const PhasePoint& x, double margin) const;

  static PhasePoint make_point(double x, double y, double z, double px, double py, double pz);

 private:
  const OperatorField& op_by_name(const std::string& name) const;

  double a_;
  Expression h_, pot_, h2_, h3_, hcyl_, hsph_, hpar_, momentum_;
  OperatorField k1_, kcyl_, ksph_, kpar_;
};

}  // namespace haantjes
