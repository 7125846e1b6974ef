// Model loading: builtin systems and a line-oriented text format.
//
// A model file is a sequence of `key = value` lines. Header keys: n, builtin,
// param NAME, box (two numbers), margin. Section keys: `stackel_row i`
// (bracketed row of n expressions), `f i`, `lambda i`, `psi i`, `w i`,
// `hamiltonian i`, and `operator NAME` (bracketed 2n x 2n matrix). Which
// sections are present decides the model kind. `#` starts a comment.
#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "haantjes/calogero.hpp"
#include "haantjes/qbh.hpp"
#include "haantjes/rng.hpp"
#include "haantjes/stackel.hpp"

namespace haantjes {

enum class ModelKind { Calogero, Goldfish, Stackel, Qbh, Custom };

struct Model {
  ModelKind kind = ModelKind::Custom;
  std::string name;  // builtin id or file stem
  int n = 0;
  std::map<std::string, double> params;
  double box_lo = -2.0;
  double box_hi = 2.0;
  double margin = 0.1;

  std::shared_ptr<CalogeroModel> calogero;
  std::shared_ptr<StackelSystem> stackel;
  std::shared_ptr<QbhSystem> qbh;
  std::vector<Expression> psi, w;  // classical kinetic/potential split, optional

  std::vector<std::pair<std::string, OperatorField>> custom_operators;
  std::vector<Expression> custom_hamiltonians;

  // Rejects points too close to the model's singular set (coordinate or
  // eigenvalue collisions, vanishing determinants) and points where any
  // model quantity fails to evaluate finitely.
  bool admissible(const PhasePoint& x) const;

  // Uniform rejection sampling over [box_lo, box_hi]^{2n}.
  PhasePoint sample(Rng& rng) const;
  std::vector<PhasePoint> sample_many(Rng& rng, int count) const;
};

// Reads a model file. `overrides` replace file parameter values before any
// expression is parsed, so overridden constants are bound into the trees.
// Throws InvalidModel with a line reference on malformed input.
Model load_model(const std::string& path, const std::map<std::string, double>& overrides = {});

// Builtin ids: "calogero3" (parameter a) and "goldfish" (parameters n, a, b).
Model load_builtin(const std::string& id, const std::map<std::string, double>& overrides = {});

}  // namespace haantjes
