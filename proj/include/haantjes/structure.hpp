// Symplectic Haantjes structures: a family K_0 = I, K_1, ..., K_{n-1} of
// Haantjes operators on T*Q, compatible with the canonical symplectic form,
// pairwise commuting, and closed as a module under multiplication by
// arbitrary smooth coefficient fields. Chains of Hamiltonians attached to
// such a family are pairwise in involution.
#pragma once

#include <complex>
#include <vector>

#include "haantjes/fields.hpp"
#include "haantjes/report.hpp"
#include "haantjes/rng.hpp"
#include "haantjes/tensors.hpp"

namespace haantjes {

struct HaantjesStructure {
  HaantjesStructure(int n_dof, std::vector<OperatorField> ops);
  int n;                                // degrees of freedom; operators act on 2n
  std::vector<OperatorField> operators; // K_0 (identity) first
};

struct ChainSpec {
  std::vector<Expression> hamiltonians;  // H_1 .. H_n
};

struct StructureCheckOptions {
  double tol = 1e-8;
  int module_fields = 10;   // random coefficient tuples for module closure
  int module_degree = 2;    // polynomial degree of the coefficient fields
  std::uint64_t seed = 1;
  std::string id_prefix = "structure";
};

// Runs the axiom battery over the samples: identity of K_0, Haantjes tensor
// of every operator, compatibility K^T omega = omega K, pairwise commutation,
// and Haantjes vanishing of random-coefficient combinations sum_a f_a K_a.
VerificationReport verify_structure(const HaantjesStructure& s,
                                    const std::vector<PhasePoint>& samples,
                                    const StructureCheckOptions& opt);

// Max over samples of |dH_{j+1} - K_j^T dH_1|_inf / max(|dH_1|_inf, eps),
// one value per chain member starting at j = 0 (which is exactly zero).
std::vector<double> verify_lenard_chain(const HaantjesStructure& s, const ChainSpec& chain,
                                        const std::vector<PhasePoint>& samples);

struct EigenAnalysis {
  std::vector<std::complex<double>> eigenvalues;
  std::vector<double> cluster_values;  // representatives after gap clustering
  std::vector<int> multiplicities;
  bool real = false;        // spectrum real within tolerance
  bool semisimple = false;  // eigenvector condition number below 1e8
  bool distinct = false;    // cluster gaps above tolerance
  bool doubled = false;     // every cluster has even multiplicity
};

// Pointwise spectral diagnostics with relative gap tolerance `tol`.
EigenAnalysis eigen_analysis(const OperatorField& L, const PhasePoint& x, double tol);

struct FramePairResult {
  int i = 0, j = 0;
  bool involutive = false;
  int checked = 0;
  int degenerate = 0;  // samples skipped because the pair itself was degenerate
};

// Pairwise involutivity of a frame: span{Y_i, Y_j, [Y_i, Y_j]} must stay
// two-dimensional at every sample where Y_i, Y_j are independent.
std::vector<FramePairResult> check_frame_integrability(const std::vector<VectorField>& frame,
                                                       const std::vector<PhasePoint>& samples,
                                                       double tol);

}  // namespace haantjes
