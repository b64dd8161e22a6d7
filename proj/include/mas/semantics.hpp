#pragma once

#include "mas/types.hpp"

namespace mas {

struct SatResult {
  bool holds;
  SimWitness witness;
};

/// Satisfaction of a specification by an automaton: the automaton is
/// terminating and the synchronized relation from the initial pair keeps
/// ready sets inside the acceptance sets, marks only at marked
/// specification states and is closed under the automaton's transitions.
/// The bottom specification is satisfied by no automaton.
SatResult satisfies(const Automaton& m, const Mas& s);

/// Satisfaction of a specification with priorities: base satisfaction
/// plus, for each priority set, either no model state implements any state
/// named in it or some named (state, action) pair is realized.
SatResult satisfies_masp(const Automaton& m, const Masp& sp);

/// The satisfaction clauses alone, for callers that have already
/// established termination (the enumeration oracle checks it once per
/// candidate).
SatResult satisfies_relation(const Automaton& m, const Mas& s);
SatResult satisfies_masp_relation(const Automaton& m, const Masp& sp);

/// No unnecessary transitions: every fireable action of a related model
/// state lies in the union of the partner state's acceptance set, and the
/// relation is closed under the model's transitions.
SatResult no_unnecessary(const Automaton& m, const Mas& s);

/// Pruning of unnecessary transitions: pairs (r, q) reachable from the
/// initial pair, transitions kept only on actions inside the acceptance
/// union of q, marking inherited from the automaton component.
Automaton rho_u(const Automaton& m, const Mas& s);

}  // namespace mas
