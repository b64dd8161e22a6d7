#pragma once

#include <vector>

#include "mas/types.hpp"

namespace mas {

/// Structural validation: throws Error{Invalid} when a container invariant
/// is broken (initial state missing, transition endpoint unknown, action
/// outside the alphabet, acceptance map not total, priority pair dangling).
void validate(const Automaton& m);
void validate(const Mas& s);
void validate(const Masp& sp);

/// Fireable actions from a state.
ActionSet ready(const Automaton& m, const StateId& s);
ActionSet ready(const Mas& s, const StateId& q);

struct ReachabilitySets {
  std::set<StateId> pre;        // reflexive-transitive predecessors
  std::set<StateId> post;       // reflexive-transitive successors
  std::set<StateId> pre_plus;   // union of pre over one-step predecessors
  std::set<StateId> post_plus;  // union of post over one-step successors
  std::set<StateId> cycle;      // pre_plus ∩ post_plus
};

ReachabilitySets reachability_sets(const Automaton& m, const StateId& s);
ReachabilitySets reachability_sets(const Mas& s, const StateId& q);

/// States reachable from the initial state.
std::set<StateId> reachable_states(const Automaton& m);
std::set<StateId> reachable_states(const Mas& s);

/// Synchronous product. Both automata must share an alphabet; only
/// reachable pairs are materialized, named "(left,right)".
Automaton product(const Automaton& m1, const Automaton& m2);

struct BisimResult {
  bool bisimilar;
  SimWitness witness;
};

/// Bisimilarity of deterministic automata: equal ready sets, matched
/// marking, closed under transitions from the initial pair.
BisimResult bisimilar(const Automaton& m1, const Automaton& m2);

enum class StateClass { Deadlock, InLivelock, Normal, Unreachable };

/// Deadlock: unmarked with no fireable action. In a livelock: the state's
/// cycle set is nonempty, unmarked and has no exiting transition.
/// Unreachable states are flagged, not classified.
StateClass classify_state(const Automaton& m, const StateId& r);

struct TerminationResult {
  bool terminating;
  std::vector<StateId> offenders;  // reachable deadlock / livelock states
};

/// Literal classifier over every reachable state.
TerminationResult is_terminating(const Automaton& m);

/// Equivalent criterion: every reachable state can reach a marked state.
/// Kept separate so the two routes can be cross-checked.
bool can_all_reach_marked(const Automaton& m);

/// Drops the acceptance sets of a specification.
Automaton underlying(const Mas& s);

/// Drops states unreachable from the initial state.
Automaton gc(const Automaton& m);
Mas gc(const Mas& s);

}  // namespace mas
