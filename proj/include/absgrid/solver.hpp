#pragma once

#include <optional>

#include "absgrid/ground.hpp"

namespace absgrid {

// An interpretation is the sorted set of true ground-atom ids.
using Model = std::vector<int>;

struct SolveBudget {
  long long max_models = 0;  // 0 = unlimited
  std::optional<long long> timeout_ms;
  std::optional<std::vector<int>> minimize_atoms;
};

// Choice rules {a} <- B become a <- B, not a' and a' <- B, not a with a
// fresh hidden atom a' per rule.
GroundProgram desugar_choices(const GroundProgram& g);

// FLP-style kept-rule reduct: rules whose full body is satisfied by i, with
// negative bodies removed. Choice rules are desugared first; the fresh atoms
// take their determined values.
GroundProgram reduct(const GroundProgram& g, const Model& i);

struct LeastModelResult {
  Model atoms;
  bool consistent = true;  // false if a constraint body is derivable
};

// Least Herbrand model of a negation-free ground program by fixpoint
// iteration.
LeastModelResult least_model(const GroundProgram& g);

// Stability test: i (over public atom ids) equals the least model of the
// reduct and violates no constraint.
bool is_answer_set(const GroundProgram& g, const Model& i);

struct SolveResult {
  std::vector<Model> models;  // canonical order: size, then lexicographic
  bool exhausted = false;     // search space fully explored
  bool timed_out = false;
  unsigned long long decisions = 0;

  bool unsat() const { return exhausted && models.empty(); }
};

struct MinimizeResult {
  std::optional<Model> best;
  long long best_cost = -1;
  bool optimal = false;
  bool timed_out = false;
};

// DPLL over atom truth values (ascending id, false first) with unit
// propagation on rule completion and a reduct/least-model stability test on
// each total candidate. Deterministic.
SolveResult enumerate_answer_sets(const GroundProgram& g,
                                  const SolveBudget& b = {});

// Branch-and-bound minimization of |true ∩ minimize_atoms| over answer
// sets; returns the best model found with an optimality flag.
MinimizeResult solve_minimize(const GroundProgram& g, const SolveBudget& b);

// Model helpers.
Model model_from_atoms(const GroundProgram& g, const std::vector<Atom>& atoms);
std::vector<Atom> atoms_of(const GroundProgram& g, const Model& m);
std::string model_str(const GroundProgram& g, const Model& m);

}  // namespace absgrid
