// Verification orchestration: runs a suite of checks against a loaded model
// over rejection-sampled phase-space points and collects a report.
#pragma once

#include <cstdint>
#include <string>

#include "haantjes/model.hpp"
#include "haantjes/report.hpp"

namespace haantjes {

struct VerifyOptions {
  // One of: structure, chains, involution, killing, independence, all.
  std::string suite = "all";
  int samples = 100;
  std::uint64_t seed = 7;
  // When positive, replaces the default tolerance of every asserted residual
  // check. Rank checks keep their integer criterion and the identity axiom
  // stays exact (1e-12): both are structural, not numerical.
  double tol = 0.0;
};

// Deterministic for fixed (model, options): the sample set and every random
// probe derive from forks of the seed, and the report is sorted by id.
// Throws InvalidModel on an unknown suite or one the model cannot serve.
VerificationReport run_verification(const Model& model, const VerifyOptions& opt);

}  // namespace haantjes
