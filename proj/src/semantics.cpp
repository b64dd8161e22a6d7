#include "mas/semantics.hpp"

#include <deque>

#include "mas/model.hpp"

namespace mas {

namespace {

void check_alphabets(const Automaton& m, const Mas& s, const char* op) {
  if (m.alphabet != s.alphabet)
    throw Error(Error::Kind::AlphabetMismatch,
                std::string(op) + " requires identical alphabets");
}

// Priority clauses of a specification with priorities, evaluated over an
// established base relation.
SatResult priorities_hold(const Automaton& m, const Masp& sp, SatResult base) {
  std::map<StateId, std::set<StateId>> implementers;
  for (const auto& [r, q] : base.witness.pairs) implementers[q].insert(r);
  for (const PrioritySet& p : sp.priorities) {
    bool any_implemented = false;
    bool realized = false;
    for (const auto& [q, a] : p) {
      auto it = implementers.find(q);
      if (it == implementers.end()) continue;
      any_implemented = true;
      for (const StateId& r : it->second)
        if (ready(m, r).contains(a)) realized = true;
    }
    if (any_implemented && !realized) {
      SimWitness w = base.witness;
      std::string desc = "priority {";
      bool first = true;
      for (const auto& [q, a] : p) {
        if (!first) desc += " | ";
        first = false;
        desc += "(" + q + "," + a + ")";
      }
      desc += "} unmet";
      w.violation = SimViolation{m.initial, sp.base.initial, desc};
      return {false, w};
    }
  }
  return {true, base.witness};
}

}  // namespace

SatResult satisfies(const Automaton& m, const Mas& s) {
  if (s.bottom) {
    SimWitness w;
    w.violation = SimViolation{m.initial, "", "bottom specification"};
    return {false, w};
  }
  check_alphabets(m, s, "satisfaction");
  TerminationResult term = is_terminating(m);
  if (!term.terminating) {
    SimWitness w;
    w.violation = SimViolation{term.offenders.front(), s.initial,
                               "automaton is not terminating"};
    return {false, w};
  }
  return satisfies_relation(m, s);
}

SatResult satisfies_relation(const Automaton& m, const Mas& s) {
  SimWitness w;
  if (s.bottom) {
    w.violation = SimViolation{m.initial, "", "bottom specification"};
    return {false, w};
  }
  std::deque<std::pair<StateId, StateId>> queue{{m.initial, s.initial}};
  w.pairs.insert({m.initial, s.initial});
  while (!queue.empty()) {
    auto [r, q] = queue.front();
    queue.pop_front();
    ActionSet fireable = ready(m, r);
    if (!s.acc_at(q).contains(fireable)) {
      w.violation = SimViolation{r, q, "ready set not in acceptance set"};
      return {false, w};
    }
    if (m.is_marked(r) && !s.is_marked(q)) {
      w.violation =
          SimViolation{r, q, "marked state maps to unmarked spec state"};
      return {false, w};
    }
    for (const Action& a : fireable) {
      auto qn = s.step(q, a);
      if (!qn) {
        w.violation =
            SimViolation{r, q, "transition on '" + a + "' undefined in spec"};
        return {false, w};
      }
      std::pair<StateId, StateId> next{*m.step(r, a), *qn};
      if (w.pairs.insert(next).second) queue.push_back(next);
    }
  }
  return {true, w};
}

SatResult satisfies_masp(const Automaton& m, const Masp& sp) {
  SatResult base = satisfies(m, sp.base);
  if (!base.holds) return base;
  return priorities_hold(m, sp, std::move(base));
}

SatResult satisfies_masp_relation(const Automaton& m, const Masp& sp) {
  SatResult base = satisfies_relation(m, sp.base);
  if (!base.holds) return base;
  return priorities_hold(m, sp, std::move(base));
}

SatResult no_unnecessary(const Automaton& m, const Mas& s) {
  check_alphabets(m, s, "unnecessary-transition check");
  SimWitness w;
  if (s.bottom) {
    w.violation = SimViolation{m.initial, "", "bottom specification"};
    return {false, w};
  }
  std::deque<std::pair<StateId, StateId>> queue{{m.initial, s.initial}};
  w.pairs.insert({m.initial, s.initial});
  while (!queue.empty()) {
    auto [r, q] = queue.front();
    queue.pop_front();
    ActionSet fireable = ready(m, r);
    ActionSet allowed = s.acc_at(q).union_all();
    if (!fireable.subset_of(allowed)) {
      w.violation =
          SimViolation{r, q, "ready set leaves the acceptance union"};
      return {false, w};
    }
    for (const Action& a : fireable) {
      auto qn = s.step(q, a);
      if (!qn) {
        w.violation =
            SimViolation{r, q, "transition on '" + a + "' undefined in spec"};
        return {false, w};
      }
      std::pair<StateId, StateId> next{*m.step(r, a), *qn};
      if (w.pairs.insert(next).second) queue.push_back(next);
    }
  }
  return {true, w};
}

Automaton rho_u(const Automaton& m, const Mas& s) {
  check_alphabets(m, s, "rho_u");
  if (s.bottom)
    throw Error(Error::Kind::BottomInput,
                "rho_u is undefined for the bottom specification");
  Automaton out;
  out.name = "rho_u";
  out.alphabet = m.alphabet;
  out.initial = pair_id(m.initial, s.initial);
  std::deque<std::pair<StateId, StateId>> queue{{m.initial, s.initial}};
  std::set<std::pair<StateId, StateId>> seen{{m.initial, s.initial}};
  while (!queue.empty()) {
    auto [r, q] = queue.front();
    queue.pop_front();
    StateId id = pair_id(r, q);
    out.states.insert(id);
    if (m.is_marked(r)) out.marked.insert(id);
    ActionSet allowed = s.acc_at(q).union_all();
    for (const Action& a : ready(m, r)) {
      if (!allowed.contains(a)) continue;
      auto qn = s.step(q, a);
      if (!qn) continue;  // only for non-normal-form inputs
      std::pair<StateId, StateId> next{*m.step(r, a), *qn};
      out.transitions[id][a] = pair_id(next.first, next.second);
      if (seen.insert(next).second) queue.push_back(next);
    }
  }
  return out;
}

}  // namespace mas
