#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "fusion/grid_density.hpp"
#include "fusion/pooling.hpp"

namespace fusion {

enum class Axiom {
  Symmetry = 1,
  ZeroPreservation,
  Unanimity,
  StrongSetwise,
  WeakSetwise,
  LikelihoodPrinciple,
  WeakLikelihoodPrinciple,
  IndependencePreservation,
  FactorizationPreservation,
  ExternalBayesianity,
  IndividualizedBayesianity,
  GeneralizedBayesianity,
};

inline constexpr int kAxiomCount = 12;
inline Axiom axiom_from_index(int i) { return static_cast<Axiom>(i); }
inline int axiom_index(Axiom a) { return static_cast<int>(a); }

// "A1" ... "A12".
std::string to_string(Axiom a);
std::string axiom_name(Axiom a);
Axiom parse_axiom(const std::string& text);

enum class Expectation { Satisfied, Blank, NotApplicable, EqualWeightsOnly };
std::string to_string(Expectation e);

using ExpectedMatrix = std::map<std::pair<PoolingKind, Axiom>, Expectation>;
// Published pass/fail table for the ten basic pooling kinds.
const ExpectedMatrix& expected_matrix();
Expectation expectation(PoolingKind kind, Axiom axiom);

struct Counterexample {
  std::uint64_t seed = 0;
  int trial = 0;
  std::string descriptor;
};

struct AxiomCheckReport {
  Axiom axiom = Axiom::Symmetry;
  PoolingSpec pooling;
  int trials = 0;
  double tolerance = 0.0;
  double max_violation = 0.0;
  bool passed = true;
  std::optional<Counterexample> counterexample;
};

// Fixed harness grids: [−6, 6] with 201 nodes and [−6, 6]² with 41×41 nodes.
Grid axiom_grid_1d();
Grid axiom_grid_2d();

// Randomized check of one axiom identity. The q0 and xi0 of spec, when given, must live on
// axiom_grid_1d(); otherwise the harness supplies fixed ones. Product-form 2-D versions are
// built from the 1-D ones for the factorization and independence axioms.
AxiomCheckReport check_axiom(const PoolingSpec& spec, Axiom axiom, int trials, std::uint64_t seed,
                             double tol = 1e-6);

}  // namespace fusion
