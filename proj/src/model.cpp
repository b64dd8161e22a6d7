#include "mas/model.hpp"

#include <deque>

namespace mas {

namespace {

template <typename T>
void check_transitions(const T& x) {
  for (const auto& [src, row] : x.transitions) {
    if (!x.has_state(src))
      throw Error(Error::Kind::Invalid,
                  "transition source '" + src + "' is not a state");
    for (const auto& [a, dst] : row) {
      if (x.alphabet.count(a) == 0)
        throw Error(Error::Kind::Invalid,
                    "action '" + a + "' is not in the alphabet");
      if (!x.has_state(dst))
        throw Error(Error::Kind::Invalid,
                    "transition target '" + dst + "' is not a state");
    }
  }
  for (const StateId& g : x.marked)
    if (!x.has_state(g))
      throw Error(Error::Kind::Invalid,
                  "marked state '" + g + "' is not a state");
}

template <typename T>
ActionSet ready_impl(const T& x, const StateId& s) {
  if (!x.has_state(s))
    throw Error(Error::Kind::UnknownState, "unknown state '" + s + "'");
  ActionSet out;
  auto row = x.transitions.find(s);
  if (row != x.transitions.end())
    for (const auto& [a, dst] : row->second) out.insert(a);
  return out;
}

template <typename T>
std::set<StateId> forward_closure(const T& x, const StateId& from) {
  std::set<StateId> seen{from};
  std::deque<StateId> queue{from};
  while (!queue.empty()) {
    StateId cur = queue.front();
    queue.pop_front();
    auto row = x.transitions.find(cur);
    if (row == x.transitions.end()) continue;
    for (const auto& [a, dst] : row->second)
      if (seen.insert(dst).second) queue.push_back(dst);
  }
  return seen;
}

template <typename T>
std::map<StateId, std::set<StateId>> reverse_edges(const T& x) {
  std::map<StateId, std::set<StateId>> rev;
  for (const auto& [src, row] : x.transitions)
    for (const auto& [a, dst] : row) rev[dst].insert(src);
  return rev;
}

std::set<StateId> backward_closure(
    const std::map<StateId, std::set<StateId>>& rev, const StateId& from) {
  std::set<StateId> seen{from};
  std::deque<StateId> queue{from};
  while (!queue.empty()) {
    StateId cur = queue.front();
    queue.pop_front();
    auto it = rev.find(cur);
    if (it == rev.end()) continue;
    for (const StateId& p : it->second)
      if (seen.insert(p).second) queue.push_back(p);
  }
  return seen;
}

template <typename T>
ReachabilitySets reachability_impl(const T& x, const StateId& s) {
  if (!x.has_state(s))
    throw Error(Error::Kind::UnknownState, "unknown state '" + s + "'");
  ReachabilitySets out;
  auto rev = reverse_edges(x);
  out.post = forward_closure(x, s);
  out.pre = backward_closure(rev, s);
  auto preds = rev.find(s);
  if (preds != rev.end())
    for (const StateId& p : preds->second) {
      auto cl = backward_closure(rev, p);
      out.pre_plus.insert(cl.begin(), cl.end());
    }
  auto row = x.transitions.find(s);
  if (row != x.transitions.end())
    for (const auto& [a, dst] : row->second) {
      auto cl = forward_closure(x, dst);
      out.post_plus.insert(cl.begin(), cl.end());
    }
  for (const StateId& q : out.pre_plus)
    if (out.post_plus.count(q)) out.cycle.insert(q);
  return out;
}

}  // namespace

void validate(const Automaton& m) {
  if (!m.has_state(m.initial))
    throw Error(Error::Kind::Invalid,
                "initial state '" + m.initial + "' is not a state");
  check_transitions(m);
}

void validate(const Mas& s) {
  if (s.bottom) return;
  if (!s.has_state(s.initial))
    throw Error(Error::Kind::Invalid,
                "initial state '" + s.initial + "' is not a state");
  check_transitions(s);
  for (const StateId& q : s.states)
    if (s.acc.find(q) == s.acc.end())
      throw Error(Error::Kind::Invalid,
                  "state '" + q + "' has no acceptance set");
  for (const auto& [q, as] : s.acc) {
    if (!s.has_state(q))
      throw Error(Error::Kind::Invalid,
                  "acceptance set for unknown state '" + q + "'");
    for (const ActionSet& x : as)
      for (const Action& a : x)
        if (s.alphabet.count(a) == 0)
          throw Error(Error::Kind::Invalid,
                      "acceptance entry action '" + a +
                          "' is not in the alphabet");
  }
}

void validate(const Masp& sp) {
  validate(sp.base);
  for (const PrioritySet& p : sp.priorities) {
    if (p.empty())
      throw Error(Error::Kind::Invalid, "empty priority set");
    for (const auto& [q, a] : p) {
      if (!sp.base.has_state(q))
        throw Error(Error::Kind::Invalid,
                    "priority references unknown state '" + q + "'");
      if (sp.base.alphabet.count(a) == 0)
        throw Error(Error::Kind::Invalid,
                    "priority references unknown action '" + a + "'");
    }
  }
}

ActionSet ready(const Automaton& m, const StateId& s) {
  return ready_impl(m, s);
}
ActionSet ready(const Mas& s, const StateId& q) { return ready_impl(s, q); }

ReachabilitySets reachability_sets(const Automaton& m, const StateId& s) {
  return reachability_impl(m, s);
}
ReachabilitySets reachability_sets(const Mas& s, const StateId& q) {
  return reachability_impl(s, q);
}

std::set<StateId> reachable_states(const Automaton& m) {
  return forward_closure(m, m.initial);
}
std::set<StateId> reachable_states(const Mas& s) {
  if (s.bottom) return {};
  return forward_closure(s, s.initial);
}

Automaton product(const Automaton& m1, const Automaton& m2) {
  if (m1.alphabet != m2.alphabet)
    throw Error(Error::Kind::AlphabetMismatch,
                "product requires identical alphabets");
  Automaton out;
  out.name = "product";
  out.alphabet = m1.alphabet;
  out.initial = pair_id(m1.initial, m2.initial);
  std::deque<std::pair<StateId, StateId>> queue{{m1.initial, m2.initial}};
  std::set<std::pair<StateId, StateId>> seen{{m1.initial, m2.initial}};
  while (!queue.empty()) {
    auto [r1, r2] = queue.front();
    queue.pop_front();
    StateId id = pair_id(r1, r2);
    out.states.insert(id);
    if (m1.is_marked(r1) && m2.is_marked(r2)) out.marked.insert(id);
    ActionSet shared = ready(m1, r1).intersect(ready(m2, r2));
    for (const Action& a : shared) {
      StateId t1 = *m1.step(r1, a);
      StateId t2 = *m2.step(r2, a);
      out.transitions[id][a] = pair_id(t1, t2);
      if (seen.insert({t1, t2}).second) queue.push_back({t1, t2});
    }
  }
  return out;
}

BisimResult bisimilar(const Automaton& m1, const Automaton& m2) {
  SimWitness w;
  std::deque<std::pair<StateId, StateId>> queue{{m1.initial, m2.initial}};
  w.pairs.insert({m1.initial, m2.initial});
  while (!queue.empty()) {
    auto [r1, r2] = queue.front();
    queue.pop_front();
    ActionSet z1 = ready(m1, r1);
    ActionSet z2 = ready(m2, r2);
    if (!(z1 == z2)) {
      w.violation = SimViolation{r1, r2, "ready sets differ"};
      return {false, w};
    }
    if (m1.is_marked(r1) != m2.is_marked(r2)) {
      w.violation = SimViolation{r1, r2, "marking differs"};
      return {false, w};
    }
    for (const Action& a : z1) {
      std::pair<StateId, StateId> next{*m1.step(r1, a), *m2.step(r2, a)};
      if (w.pairs.insert(next).second) queue.push_back(next);
    }
  }
  return {true, w};
}

StateClass classify_state(const Automaton& m, const StateId& r) {
  if (!m.has_state(r))
    throw Error(Error::Kind::UnknownState, "unknown state '" + r + "'");
  if (reachable_states(m).count(r) == 0) return StateClass::Unreachable;
  ActionSet fireable = ready(m, r);
  if (!m.is_marked(r) && fireable.empty()) return StateClass::Deadlock;
  ReachabilitySets rs = reachability_sets(m, r);
  if (!rs.cycle.empty()) {
    bool has_marked = false;
    bool has_exit = false;
    for (const StateId& c : rs.cycle) {
      if (m.is_marked(c)) has_marked = true;
      auto row = m.transitions.find(c);
      if (row != m.transitions.end())
        for (const auto& [a, dst] : row->second)
          if (rs.cycle.count(dst) == 0) has_exit = true;
    }
    if (!has_marked && !has_exit) return StateClass::InLivelock;
  }
  return StateClass::Normal;
}

TerminationResult is_terminating(const Automaton& m) {
  TerminationResult out{true, {}};
  for (const StateId& r : reachable_states(m)) {
    StateClass c = classify_state(m, r);
    if (c == StateClass::Deadlock || c == StateClass::InLivelock) {
      out.terminating = false;
      out.offenders.push_back(r);
    }
  }
  return out;
}

bool can_all_reach_marked(const Automaton& m) {
  auto rev = reverse_edges(m);
  std::set<StateId> coreach;
  std::deque<StateId> queue;
  for (const StateId& g : m.marked)
    if (coreach.insert(g).second) queue.push_back(g);
  while (!queue.empty()) {
    StateId cur = queue.front();
    queue.pop_front();
    auto it = rev.find(cur);
    if (it == rev.end()) continue;
    for (const StateId& p : it->second)
      if (coreach.insert(p).second) queue.push_back(p);
  }
  for (const StateId& r : reachable_states(m))
    if (coreach.count(r) == 0) return false;
  return true;
}

Automaton underlying(const Mas& s) {
  if (s.bottom)
    throw Error(Error::Kind::BottomInput,
                "the bottom specification has no underlying automaton");
  Automaton out;
  out.name = s.name;
  out.alphabet = s.alphabet;
  out.states = s.states;
  out.initial = s.initial;
  out.transitions = s.transitions;
  out.marked = s.marked;
  return out;
}

Automaton gc(const Automaton& m) {
  Automaton out = m;
  std::set<StateId> live = reachable_states(m);
  std::erase_if(out.states, [&](const StateId& q) { return !live.count(q); });
  std::erase_if(out.transitions,
                [&](const auto& kv) { return !live.count(kv.first); });
  std::erase_if(out.marked, [&](const StateId& q) { return !live.count(q); });
  return out;
}

Mas gc(const Mas& s) {
  if (s.bottom) return s;
  Mas out = s;
  std::set<StateId> live = reachable_states(s);
  std::erase_if(out.states, [&](const StateId& q) { return !live.count(q); });
  std::erase_if(out.transitions,
                [&](const auto& kv) { return !live.count(kv.first); });
  std::erase_if(out.acc,
                [&](const auto& kv) { return !live.count(kv.first); });
  std::erase_if(out.marked, [&](const StateId& q) { return !live.count(q); });
  return out;
}

}  // namespace mas
