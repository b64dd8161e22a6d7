#include "mas/compat.hpp"

#include <deque>

#include "mas/model.hpp"
#include "mas/normalize.hpp"

namespace mas {

namespace {

const StateId kFresh = "q?";

std::vector<ActionSet> nonempty_subsets(const ActionSet& universe) {
  std::vector<Action> base(universe.begin(), universe.end());
  std::vector<ActionSet> out;
  for (std::size_t mask = 1; mask < (std::size_t{1} << base.size()); ++mask) {
    ActionSet x;
    for (std::size_t i = 0; i < base.size(); ++i)
      if (mask & (std::size_t{1} << i)) x.insert(base[i]);
    out.push_back(std::move(x));
  }
  return out;
}

class CycleEnumerator {
 public:
  CycleEnumerator(const Mas& s, const CycleLimits& limits)
      : s_(s), limits_(limits) {}

  std::set<Cycle> from(const StateId& q) { return rec(q, Cycle{}); }

 private:
  const Mas& s_;
  const CycleLimits& limits_;
  std::size_t steps_ = 0;
  std::map<StateId, std::set<StateId>> post_memo_;

  const std::set<StateId>& post_of(const StateId& q) {
    auto it = post_memo_.find(q);
    if (it == post_memo_.end())
      it = post_memo_.emplace(q, reachability_sets(s_, q).post).first;
    return it->second;
  }

  void bump() {
    if (++steps_ > limits_.max_steps)
      throw Error(Error::Kind::CapExceeded,
                  "cycle enumeration exceeded the step budget (" +
                      std::to_string(limits_.max_steps) + ")");
  }

  std::set<Cycle> rec(const StateId& q, const Cycle& cycle) {
    bump();
    if (cycle.contains(q)) return {cycle};
    std::set<Cycle> res;
    for (const ActionSet& entry : s_.acc_at(q)) {
      ActionSet cycle_acc;
      for (const Action& a : entry) {
        auto target = s_.step(q, a);
        if (target && post_of(*target).count(q)) cycle_acc.insert(a);
      }
      if (cycle_acc.empty()) continue;
      for (const ActionSet& chosen : nonempty_subsets(cycle_acc)) {
        Cycle extended = cycle;
        extended.entries[q] = chosen;
        std::set<Cycle> current{extended};
        for (const Action& a : chosen) {
          std::set<Cycle> next;
          for (const Cycle& c : current) {
            std::set<Cycle> sub = rec(*s_.step(q, a), c);
            next.insert(sub.begin(), sub.end());
          }
          current = std::move(next);
        }
        res.insert(current.begin(), current.end());
        if (res.size() > limits_.max_cycles)
          throw Error(Error::Kind::CapExceeded,
                      "cycle enumeration exceeded the cycle cap (" +
                          std::to_string(limits_.max_cycles) + ")");
      }
    }
    return res;
  }
};

// Livelock test against a precomputed implementable-cycle set of s2.
bool live_against(const Cycle& c1, const Mas& s1, const Mas& s2,
                  const PartnerMap& pm, const std::set<Cycle>& impl_s2) {
  Cycle c2;
  for (const auto& [q, acts] : c1.entries) {
    auto p = pm.partner_of_left(q);
    if (!p)
      throw Error(Error::Kind::Precondition,
                  "cycle state '" + q + "' has no partner");
    c2.entries[*p] = acts;
  }
  if (impl_s2.count(c2) == 0) return true;

  TransitionFamilies f1 = transition_families(s1, c1);
  TransitionFamilies f2 = transition_families(s2, c2);
  bool marked1 = false;
  for (const auto& [q, acts] : c1.entries)
    if (s1.is_marked(q)) marked1 = true;
  bool marked2 = false;
  for (const auto& [q, acts] : c2.entries)
    if (s2.is_marked(q)) marked2 = true;

  // 1. mandatory exits on both sides agree somewhere
  if (!f1.a_map.empty() && !f2.a_map.empty()) {
    for (const auto& [q1, fam1] : f1.a_map) {
      auto p = pm.partner_of_left(q1);
      auto it = p ? f2.a_map.find(*p) : f2.a_map.end();
      if (it != f2.a_map.end() && compat(fam1, it->second)) return true;
    }
  }
  // 2. only the left side has mandatory exits; the right cycle is unmarked
  //    and every optional right exit is covered
  if (!f1.a_map.empty() && f2.a_map.empty() && !marked2) {
    bool all = true;
    for (const auto& [q2, fam2] : f2.o_map) {
      auto p = pm.partner_of_right(q2);
      auto it = p ? f1.a_map.find(*p) : f1.a_map.end();
      if (it == f1.a_map.end() || !compat(it->second, fam2)) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  // 3. symmetric case
  if (f1.a_map.empty() && !f2.a_map.empty() && !marked1) {
    bool all = true;
    for (const auto& [q1, fam1] : f1.o_map) {
      auto p = pm.partner_of_left(q1);
      auto it = p ? f2.a_map.find(*p) : f2.a_map.end();
      if (it == f2.a_map.end() || !compat(fam1, it->second)) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

}  // namespace

bool PartnerMap::single_partners() const {
  for (const auto& [q, ps] : forward)
    if (ps.size() > 1) return false;
  for (const auto& [q, ps] : backward)
    if (ps.size() > 1) return false;
  return true;
}

bool compat(const AcceptanceSet& a1, const AcceptanceSet& a2) {
  for (const ActionSet& x1 : a1)
    for (const ActionSet& x2 : a2)
      if (x1.intersect(x2).empty()) return false;
  return true;
}

bool dead_pair(const Mas& s1, const StateId& q1, const Mas& s2,
               const StateId& q2) {
  if (s1.bottom || !s1.has_state(q1))
    throw Error(Error::Kind::UnknownState, "unknown state '" + q1 + "'");
  if (s2.bottom || !s2.has_state(q2))
    throw Error(Error::Kind::UnknownState, "unknown state '" + q2 + "'");
  const AcceptanceSet empty_only{ActionSet{}};
  if (s1.acc_at(q1) == empty_only && s2.acc_at(q2) == empty_only) return true;
  return compat(s1.acc_at(q1), s2.acc_at(q2));
}

DeadlockFreeResult deadlock_free(const Mas& s1, const Mas& s2) {
  DeadlockFreeResult out{true, {}};
  if (s1.bottom || s2.bottom) return out;
  std::deque<std::pair<StateId, StateId>> queue{{s1.initial, s2.initial}};
  std::set<std::pair<StateId, StateId>> seen{{s1.initial, s2.initial}};
  while (!queue.empty()) {
    auto [q1, q2] = queue.front();
    queue.pop_front();
    if (!dead_pair(s1, q1, s2, q2)) {
      out.holds = false;
      out.violations.push_back({q1, q2});
    }
    for (const Action& a : ready(s1, q1).intersect(ready(s2, q2))) {
      std::pair<StateId, StateId> next{*s1.step(q1, a), *s2.step(q2, a)};
      if (seen.insert(next).second) queue.push_back(next);
    }
  }
  return out;
}

PartnerMap partners(const Mas& s1, const Mas& s2) {
  PartnerMap pm;
  if (s1.bottom || s2.bottom) return pm;
  std::deque<std::pair<StateId, StateId>> queue{{s1.initial, s2.initial}};
  std::set<std::pair<StateId, StateId>> seen{{s1.initial, s2.initial}};
  while (!queue.empty()) {
    auto [q1, q2] = queue.front();
    queue.pop_front();
    pm.forward[q1].insert(q2);
    pm.backward[q2].insert(q1);
    for (const Action& a : ready(s1, q1).intersect(ready(s2, q2))) {
      std::pair<StateId, StateId> next{*s1.step(q1, a), *s2.step(q2, a)};
      if (seen.insert(next).second) queue.push_back(next);
    }
  }
  return pm;
}

Mas unfold(const Mas& target, const Mas& context) {
  if (target.bottom || context.bottom)
    throw Error(Error::Kind::BottomInput,
                "unfolding is undefined for the bottom specification");
  if (target.alphabet != context.alphabet)
    throw Error(Error::Kind::AlphabetMismatch,
                "unfolding requires identical alphabets");
  if (context.has_state(kFresh) || target.has_state(kFresh))
    throw Error(Error::Kind::Invalid,
                "the reserved state id 'q?' may not appear in inputs");
  Mas out;
  out.name = target.name;
  out.alphabet = target.alphabet;
  out.initial = pair_id(context.initial, target.initial);
  std::deque<std::pair<StateId, StateId>> queue{
      {context.initial, target.initial}};
  std::set<std::pair<StateId, StateId>> seen{{context.initial, target.initial}};
  while (!queue.empty()) {
    auto [w, t] = queue.front();
    queue.pop_front();
    StateId id = pair_id(w, t);
    out.states.insert(id);
    out.acc[id] = target.acc_at(t);
    if (target.is_marked(t)) out.marked.insert(id);
    for (const Action& a : ready(target, t)) {
      StateId tn = *target.step(t, a);
      StateId wn = kFresh;
      if (w != kFresh) {
        auto step = context.step(w, a);
        if (step) wn = *step;
      }
      out.transitions[id][a] = pair_id(wn, tn);
      if (seen.insert({wn, tn}).second) queue.push_back({wn, tn});
    }
  }
  return out;
}

std::pair<Mas, Mas> unfoldings(const Mas& s1, const Mas& s2) {
  Mas u1 = unfold(s1, s2);
  Mas u2 = unfold(s2, u1);
  return {std::move(u1), std::move(u2)};
}

std::set<Cycle> cycles_from(const Mas& s, const StateId& q,
                            const CycleLimits& limits) {
  if (s.bottom || !s.has_state(q))
    throw Error(Error::Kind::UnknownState, "unknown state '" + q + "'");
  CycleEnumerator en(s, limits);
  return en.from(q);
}

std::set<Cycle> implementable_cycles(const Mas& s, const CycleLimits& limits) {
  std::set<Cycle> out;
  if (s.bottom) return out;
  for (const StateId& q : s.states) {
    for (const Cycle& c : cycles_from(s, q, limits)) {
      bool has_marked = false;
      for (const auto& [qc, acts] : c.entries)
        if (s.is_marked(qc)) has_marked = true;
      bool has_strict = false;
      for (const auto& [qc, acts] : c.entries)
        for (const ActionSet& x : s.acc_at(qc))
          if (acts.strict_subset_of(x)) has_strict = true;
      if (has_marked || has_strict) out.insert(c);
      if (out.size() > limits.max_cycles)
        throw Error(Error::Kind::CapExceeded,
                    "cycle enumeration exceeded the cycle cap (" +
                        std::to_string(limits.max_cycles) + ")");
    }
  }
  return out;
}

TransitionFamilies transition_families(const Mas& s, const Cycle& c) {
  TransitionFamilies out;
  for (const auto& [q, acts] : c.entries) {
    AcceptanceSet leaving;
    for (const ActionSet& x : s.acc_at(q))
      if (acts.strict_subset_of(x)) leaving.insert(x.minus(acts));
    if (s.acc_at(q).contains(acts)) {
      if (!leaving.empty()) out.o_map[q] = leaving;
    } else {
      out.a_map[q] = leaving;
    }
  }
  return out;
}

bool live(const Cycle& c1, const Mas& s1, const Mas& s2, const PartnerMap& pm,
          const CycleLimits& limits) {
  if (!pm.single_partners())
    throw Error(Error::Kind::Precondition,
                "livelock test requires single partners");
  return live_against(c1, s1, s2, pm, implementable_cycles(s2, limits));
}

bool live(const Cycle& c1, const Mas& s1, const Mas& s2, const PartnerMap& pm,
          const std::set<Cycle>& implementable_s2) {
  if (!pm.single_partners())
    throw Error(Error::Kind::Precondition,
                "livelock test requires single partners");
  return live_against(c1, s1, s2, pm, implementable_s2);
}

LivelockFreeResult livelock_free(const Mas& s1, const Mas& s2,
                                 const CycleLimits& limits) {
  PartnerMap pm = partners(s1, s2);
  if (!pm.single_partners())
    throw Error(Error::Kind::Precondition,
                "livelock-freeness requires single partners");
  LivelockFreeResult out{true, {}};
  if (s1.bottom || s2.bottom) return out;
  std::set<Cycle> impl_s2 = implementable_cycles(s2, limits);
  for (const Cycle& c1 : implementable_cycles(s1, limits)) {
    bool partnered = true;
    for (const auto& [q, acts] : c1.entries)
      if (!pm.partner_of_left(q)) partnered = false;
    if (!partnered) continue;  // never jointly implemented
    if (!live_against(c1, s1, s2, pm, impl_s2)) {
      out.holds = false;
      out.offenders.push_back(c1);
    }
  }
  return out;
}

CompatResult compatible_reachability(const Mas& s1, const Mas& s2,
                                     const CycleLimits& limits) {
  if (!s1.bottom && !s2.bottom && s1.alphabet != s2.alphabet)
    throw Error(Error::Kind::AlphabetMismatch,
                "compatible reachability requires identical alphabets");
  Mas n1 = in_normal_form(s1) ? s1 : normal_form(s1);
  Mas n2 = in_normal_form(s2) ? s2 : normal_form(s2);
  CompatResult out{true, std::nullopt, std::nullopt};
  if (n1.bottom || n2.bottom) return out;  // no models, nothing to compose
  DeadlockFreeResult df = deadlock_free(n1, n2);
  if (!df.holds) {
    out.compatible = false;
    out.deadlock_pair = df.violations.front();
    return out;
  }
  auto [u1, u2] = unfoldings(n1, n2);
  LivelockFreeResult lf = livelock_free(u1, u2, limits);
  if (!lf.holds) {
    out.compatible = false;
    out.livelock_cycle = lf.offenders.front();
  }
  return out;
}

}  // namespace mas
