#pragma once

#include "mas/types.hpp"

namespace mas {

/// A marked state is reachable from q.
bool attracted(const Mas& s, const StateId& q);

/// Acc(q) is nonempty.
bool acc_consistent(const Mas& s, const StateId& q);

/// The empty ready set is allowed at q only when q is marked.
bool f_acc_consistent(const Mas& s, const StateId& q);

/// A transition is defined on a iff some acceptance entry contains a.
bool delta_acc_consistent(const Mas& s, const StateId& q);

/// All four predicates hold at every state (vacuously true for bottom).
bool in_normal_form(const Mas& s);

/// Iterated repair to the fixpoint: remove non-attracted and
/// Acc-inconsistent states together with their incoming transitions, strip
/// the empty set from unmarked states, drop transitions on actions outside
/// the acceptance union and acceptance entries mentioning undefined
/// transitions. Returns the bottom specification when every state (or the
/// initial state) is deleted. Preserves the model set.
Mas normal_form(const Mas& s);

/// The specification admitting no model.
Mas bottom(const std::set<Action>& alphabet);

bool is_bottom(const Mas& s);

}  // namespace mas
