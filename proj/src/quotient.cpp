#include "mas/quotient.hpp"

#include <deque>
#include <vector>

#include "mas/model.hpp"
#include "mas/normalize.hpp"
#include "mas/prequotient.hpp"

namespace mas {

namespace {

// Normalizes the base and restores the priority invariants: pairs naming
// deleted states are dropped, emptied priority sets deleted (an empty
// disjunction is vacuously satisfied through its first clause).
Masp rho_masp(Masp sp) {
  sp.base = normal_form(sp.base);
  if (sp.base.bottom) {
    sp.priorities.clear();
    return sp;
  }
  std::set<PrioritySet> kept;
  for (const PrioritySet& p : sp.priorities) {
    PrioritySet trimmed;
    for (const auto& [q, a] : p)
      if (sp.base.has_state(q)) trimmed.pairs.insert({q, a});
    if (!trimmed.empty()) kept.insert(std::move(trimmed));
  }
  sp.priorities = std::move(kept);
  return sp;
}

}  // namespace

Mas dead_correction(const Mas& s1_in, const Mas& s2_in) {
  if (!s1_in.bottom && !s2_in.bottom && s1_in.alphabet != s2_in.alphabet)
    throw Error(Error::Kind::AlphabetMismatch,
                "deadlock correction requires identical alphabets");
  Mas s1 = in_normal_form(s1_in) ? s1_in : normal_form(s1_in);
  Mas s2 = in_normal_form(s2_in) ? s2_in : normal_form(s2_in);
  if (s1.bottom) return s1;
  if (s2.bottom) return s1;  // nothing to compose with

  DeadlockFreeResult df = deadlock_free(s1, s2);
  Mas cur = s1;
  const AcceptanceSet empty_only{ActionSet{}};
  for (const auto& [q1, q2] : df.violations) {
    const AcceptanceSet& acc2 = s2.acc_at(q2);
    AcceptanceSet& acc1 = cur.acc[q1];
    if (acc2 == empty_only) {
      if (acc1.contains(ActionSet{}))
        acc1 = empty_only;
      else
        acc1 = AcceptanceSet{};
    } else {
      AcceptanceSet kept;
      for (const ActionSet& x1 : acc1) {
        bool meets_all = true;
        for (const ActionSet& x2 : acc2)
          if (x1.intersect(x2).empty()) {
            meets_all = false;
            break;
          }
        if (meets_all) kept.insert(x1);
      }
      acc1 = std::move(kept);
    }
  }
  Mas normalized = normal_form(cur);
  if (!normalized.bottom) normalized.name = s1.name;
  return normalized;
}

Masp live_corr_cycle(const Masp& s1p, const Cycle& c1, const Mas& s2,
                     const Cycle& c2, const PartnerMap& pm) {
  const Mas& base = s1p.base;
  TransitionFamilies f2 = transition_families(s2, c2);

  if (!f2.a_map.empty()) {
    // States that can realize every mandatory exit of the partner cycle.
    std::vector<StateId> chooseable;
    for (const StateId& q1 : base.states) {
      auto p = pm.partner_of_left(q1);
      if (!p) continue;
      auto fam = f2.a_map.find(*p);
      if (fam == f2.a_map.end()) continue;
      ActionSet fireable = ready(base, q1);
      bool all_meet = true;
      for (const ActionSet& a : fam->second)
        if (a.intersect(fireable).empty()) {
          all_meet = false;
          break;
        }
      if (all_meet) chooseable.push_back(q1);
    }
    if (!chooseable.empty()) {
      // One priority set per choice of a realizable exit set at each state.
      std::vector<std::vector<std::pair<StateId, ActionSet>>> options;
      bool any_empty = false;
      for (const StateId& q1 : chooseable) {
        ActionSet fireable = ready(base, q1);
        std::set<ActionSet> choices;
        for (const ActionSet& a : f2.a_map.at(*pm.partner_of_left(q1)))
          choices.insert(a.intersect(fireable));
        std::vector<std::pair<StateId, ActionSet>> per_state;
        for (const ActionSet& x : choices) per_state.push_back({q1, x});
        if (per_state.empty()) any_empty = true;
        options.push_back(std::move(per_state));
      }
      std::set<PrioritySet> added;
      // No choice functions exist when some state offers no exit set.
      if (!any_empty) {
        std::vector<std::size_t> index(options.size(), 0);
        while (true) {
          PrioritySet p;
          for (std::size_t i = 0; i < options.size(); ++i) {
            const auto& [q1, x] = options[i][index[i]];
            for (const Action& a : x) p.pairs.insert({q1, a});
          }
          added.insert(std::move(p));
          std::size_t i = 0;
          while (i < options.size() && ++index[i] == options[i].size()) {
            index[i] = 0;
            ++i;
          }
          if (i == options.size()) break;
        }
      }
      Masp out = s1p;
      out.priorities.insert(added.begin(), added.end());
      return out;
    }
  } else if ([&] {
               for (const auto& [q2, acts] : c2.entries)
                 if (s2.is_marked(q2)) return false;
               return true;
             }()) {
    // Cover every optional exit of the (unmarked) partner cycle.
    Masp out = s1p;
    for (const auto& [q2, fam2] : f2.o_map) {
      auto q1 = pm.partner_of_right(q2);
      if (!q1 || !out.base.has_state(*q1)) continue;
      AcceptanceSet kept;
      for (const ActionSet& x : out.base.acc_at(*q1)) {
        bool meets_all = true;
        for (const ActionSet& o : fam2)
          if (x.intersect(o).empty()) {
            meets_all = false;
            break;
          }
        if (meets_all) kept.insert(x);
      }
      out.base.acc[*q1] = std::move(kept);
    }
    return rho_masp(std::move(out));
  }

  // Fallback: forbid implementing the cycle at all by cutting every
  // acceptance entry with a transition back into it.
  Masp out = s1p;
  for (const StateId& q1 : out.base.states) {
    AcceptanceSet kept;
    for (const ActionSet& x : out.base.acc_at(q1)) {
      bool avoids = true;
      for (const Action& a : x) {
        auto target = out.base.step(q1, a);
        if (target && c1.contains(*target)) {
          avoids = false;
          break;
        }
      }
      if (avoids) kept.insert(x);
    }
    out.base.acc[q1] = std::move(kept);
  }
  return rho_masp(std::move(out));
}

Masp live_correction(const Mas& s1, const Mas& s2, const CycleLimits& limits) {
  PartnerMap pm = partners(s1, s2);
  if (!pm.single_partners())
    throw Error(Error::Kind::Precondition,
                "livelock correction requires single partners");
  Masp result{s1, {}};
  if (s1.bottom || s2.bottom) return result;
  std::set<Cycle> impl_s2 = implementable_cycles(s2, limits);
  for (const Cycle& c1 : implementable_cycles(s1, limits)) {
    bool partnered = true;
    for (const auto& [q, acts] : c1.entries)
      if (!pm.partner_of_left(q)) partnered = false;
    if (!partnered) continue;
    if (live(c1, s1, s2, pm, impl_s2)) continue;
    Cycle c2;
    for (const auto& [q, acts] : c1.entries)
      c2.entries[*pm.partner_of_left(q)] = acts;
    result = live_corr_cycle(result, c1, s2, c2, pm);
    if (result.base.bottom) break;
  }
  return result;
}

Masp rho_t(const Mas& s1, const Mas& s2, const CycleLimits& limits) {
  Mas n1 = in_normal_form(s1) ? s1 : normal_form(s1);
  Mas n2 = in_normal_form(s2) ? s2 : normal_form(s2);
  if (n1.bottom) return Masp{n1, {}};
  if (n2.bottom) return Masp{n1, {}};
  Mas corrected = dead_correction(n1, n2);
  if (corrected.bottom) return Masp{corrected, {}};
  auto [u1, u2] = unfoldings(corrected, n2);
  return live_correction(u1, u2, limits);
}

Masp quotient(const Mas& s1, const Mas& s2, const CycleLimits& limits) {
  if (!s1.bottom && !s2.bottom && s1.alphabet != s2.alphabet)
    throw Error(Error::Kind::AlphabetMismatch,
                "quotient requires identical alphabets");
  Mas pq = pre_quotient(s1, s2);
  Mas n2 = in_normal_form(s2) ? s2 : normal_form(s2);
  Masp out = rho_t(pq, n2, limits);
  out.base.name = "quotient";
  return out;
}

}  // namespace mas
