#pragma once

#include <functional>
#include <random>
#include <vector>

#include "mas/compat.hpp"
#include "mas/types.hpp"

namespace mas {

struct EnumLimits {
  // Upper bound on the candidate count (transition tables times marking
  // patterns) a single enumeration may touch.
  std::size_t max_candidates = 20000000;
};

/// Exhaustive, duplicate-free enumeration of the deterministic automata
/// over the alphabet with at most max_states reachable states: one
/// canonical representative per isomorphism class (breadth-first renaming
/// from the initial state), every marking pattern. The visitor returns
/// false to stop early. Throws when the candidate estimate exceeds the
/// limit (the estimate is part of the message) or the alphabet has more
/// than four actions.
void enumerate_automata(const std::set<Action>& alphabet, int max_states,
                        const std::function<bool(const Automaton&)>& visit,
                        const EnumLimits& limits = {});

/// The sub-stream of enumerate_automata that is terminating and satisfies
/// the specification.
void enumerate_models(const Mas& s, int max_states,
                      const std::function<bool(const Automaton&)>& visit,
                      const EnumLimits& limits = {});
void enumerate_models(const Masp& sp, int max_states,
                      const std::function<bool(const Automaton&)>& visit,
                      const EnumLimits& limits = {});

struct EquivResult {
  bool equivalent;
  std::optional<Automaton> distinguishing;
  bool satisfies_first = false;  // side the distinguishing model satisfies
};

/// Model-set equality up to the state bound, with a distinguishing model
/// on failure.
EquivResult models_equivalent_bounded(const Mas& sa, const Mas& sb,
                                      int max_states,
                                      const EnumLimits& limits = {});

enum class TheoremName {
  PrequoSound,
  PrequoComplete,
  DeadlockIff,
  LivelockIff,
  CompatIff,
  DeadCorrIff,
  LiveCorrIff,
  QuotientSound,
  QuotientComplete,
};

const std::vector<TheoremName>& all_theorems();
std::string theorem_name(TheoremName name);
std::optional<TheoremName> theorem_from_string(const std::string& text);

enum class Verdict { Pass, HardFail, Suspect };

struct TheoremReport {
  std::string name;
  Verdict verdict = Verdict::Pass;
  std::vector<std::string> witnesses;  // capped at bounds.max_witnesses
  std::size_t violations = 0;
  std::size_t checked = 0;
  std::string note;
};

/// `THEOREM <name> <PASS|HARD-FAIL|SUSPECT> [witness=<serialization>]`
std::string report_line(const TheoremReport& report);

struct CheckBounds {
  int model_states = 3;
  std::size_t max_witnesses = 5;
  // Cap on any exhaustive model-pair grid (rows x columns of
  // bisimulation representatives); exceeding it raises the resource-cap
  // error rather than running unbounded.
  std::size_t max_grid = 100000000;
  EnumLimits enum_limits{};
  CycleLimits cycle_limits{};
};

/// Instantiates each theorem's quantifiers exhaustively at the bound.
/// Violations of universally valid directions are HARD-FAIL; failures of
/// directions whose hypothesis quantifies over all models (checked only at
/// the bound) are SUSPECT and carry the witness.
std::vector<TheoremReport> check_theorems(const std::vector<TheoremName>& names,
                                          const Mas& s1, const Mas& s2,
                                          const CheckBounds& bounds = {});
TheoremReport check_theorem(TheoremName name, const Mas& s1, const Mas& s2,
                            const CheckBounds& bounds = {});

/// Seeded generators for property tests and the random theorem-suite
/// driver.
Automaton random_automaton(std::mt19937_64& rng,
                           const std::set<Action>& alphabet, int max_states);

/// Random specification already in normal form (never bottom).
Mas random_normal_mas(std::mt19937_64& rng, const std::set<Action>& alphabet,
                      int max_states);

/// As above, and with at least one model within the model bound. A
/// nonzero max_models additionally rejects candidates whose bounded model
/// count exceeds it, keeping exhaustive product grids tractable.
Mas random_mas_with_models(std::mt19937_64& rng,
                           const std::set<Action>& alphabet, int max_states,
                           int model_bound, int max_tries = 500,
                           std::size_t max_models = 0);

}  // namespace mas
