#pragma once

#include <vector>

#include "mas/types.hpp"

namespace mas {

/// Partner relation: which states of each specification are paired by
/// reachability in the product of the underlying automata.
struct PartnerMap {
  std::map<StateId, std::set<StateId>> forward;   // state of S1 -> states of S2
  std::map<StateId, std::set<StateId>> backward;  // state of S2 -> states of S1

  static std::optional<StateId> single(
      const std::map<StateId, std::set<StateId>>& m, const StateId& q) {
    auto it = m.find(q);
    if (it == m.end() || it->second.size() != 1) return std::nullopt;
    return *it->second.begin();
  }
  std::optional<StateId> partner_of_left(const StateId& q1) const {
    return single(forward, q1);
  }
  std::optional<StateId> partner_of_right(const StateId& q2) const {
    return single(backward, q2);
  }
  bool single_partners() const;
};

/// Exit families of a cycle. `a_map` holds the exits that every
/// implementation of the cycle must realize, `o_map` those it may realize.
struct TransitionFamilies {
  std::map<StateId, AcceptanceSet> a_map;
  std::map<StateId, AcceptanceSet> o_map;
};

struct CycleLimits {
  std::size_t max_cycles = 100000;
  std::size_t max_steps = 2000000;  // recursion budget
};

/// Every pairwise intersection of entries is nonempty.
bool compat(const AcceptanceSet& a1, const AcceptanceSet& a2);

/// Deadlock-free pair of states: both acceptance sets are exactly {∅}, or
/// they are compatible.
bool dead_pair(const Mas& s1, const StateId& q1, const Mas& s2,
               const StateId& q2);

struct DeadlockFreeResult {
  bool holds;
  std::vector<std::pair<StateId, StateId>> violations;
};

/// Every reachable pair of the underlying product is deadlock-free.
DeadlockFreeResult deadlock_free(const Mas& s1, const Mas& s2);

PartnerMap partners(const Mas& s1, const Mas& s2);

/// Unfolding of `target` in relation to `context`: states are reachable
/// pairs (context-or-fresh, target); transitions follow the target and
/// track the context while it can, falling to the reserved fresh state
/// otherwise. Acceptance sets and marking come from the target component.
Mas unfold(const Mas& target, const Mas& context);

/// Unfold s1 against s2, then s2 against the result; both outputs have
/// single partners and the same models as the inputs.
std::pair<Mas, Mas> unfoldings(const Mas& s1, const Mas& s2);

/// Cycles passing through q: recursive enumeration over the subsets of
/// each acceptance entry whose actions can come back to q.
std::set<Cycle> cycles_from(const Mas& s, const StateId& q,
                            const CycleLimits& limits = {});

/// Cycles some model can realize: a marked state in the domain, or some
/// state whose cycle actions are a strict subset of an acceptance entry.
std::set<Cycle> implementable_cycles(const Mas& s,
                                     const CycleLimits& limits = {});

TransitionFamilies transition_families(const Mas& s, const Cycle& c);

/// Livelock-freeness of one cycle against the partner specification
/// (single partners required, every cycle state partnered).
bool live(const Cycle& c1, const Mas& s1, const Mas& s2, const PartnerMap& pm,
          const CycleLimits& limits = {});

/// Same test against a precomputed implementable-cycle set of s2.
bool live(const Cycle& c1, const Mas& s1, const Mas& s2, const PartnerMap& pm,
          const std::set<Cycle>& implementable_s2);

struct LivelockFreeResult {
  bool holds;
  std::vector<Cycle> offenders;
};

/// All implementable cycles of s1 are livelock-free against s2. Inputs
/// must have single partners; cycles with unpartnered states cannot be
/// jointly implemented and are skipped.
LivelockFreeResult livelock_free(const Mas& s1, const Mas& s2,
                                 const CycleLimits& limits = {});

struct CompatResult {
  bool compatible;
  // Populated when incompatible.
  std::optional<std::pair<StateId, StateId>> deadlock_pair;
  std::optional<Cycle> livelock_cycle;  // cycle of the unfolded s1
};

/// Compatible reachability: deadlock-free and, after unfolding,
/// livelock-free.
CompatResult compatible_reachability(const Mas& s1, const Mas& s2,
                                     const CycleLimits& limits = {});

}  // namespace mas
