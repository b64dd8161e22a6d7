#include "mas/normalize.hpp"

#include <vector>

#include "mas/model.hpp"

namespace mas {

namespace {

void require_state(const Mas& s, const StateId& q) {
  if (s.bottom || !s.has_state(q))
    throw Error(Error::Kind::UnknownState, "unknown state '" + q + "'");
}

// Removes q and every transition leading into it.
void erase_state(Mas& s, const StateId& q) {
  s.states.erase(q);
  s.transitions.erase(q);
  s.acc.erase(q);
  s.marked.erase(q);
  for (auto& [src, row] : s.transitions)
    std::erase_if(row, [&](const auto& kv) { return kv.second == q; });
}

}  // namespace

bool attracted(const Mas& s, const StateId& q) {
  require_state(s, q);
  for (const StateId& r : reachability_sets(s, q).post)
    if (s.is_marked(r)) return true;
  return false;
}

bool acc_consistent(const Mas& s, const StateId& q) {
  require_state(s, q);
  return !s.acc_at(q).empty();
}

bool f_acc_consistent(const Mas& s, const StateId& q) {
  require_state(s, q);
  return !s.acc_at(q).contains(ActionSet{}) || s.is_marked(q);
}

bool delta_acc_consistent(const Mas& s, const StateId& q) {
  require_state(s, q);
  ActionSet allowed = s.acc_at(q).union_all();
  for (const Action& a : s.alphabet) {
    bool defined = s.step(q, a).has_value();
    if (defined != allowed.contains(a)) return false;
  }
  return true;
}

bool in_normal_form(const Mas& s) {
  if (s.bottom) return true;
  for (const StateId& q : s.states)
    if (!attracted(s, q) || !acc_consistent(s, q) || !f_acc_consistent(s, q) ||
        !delta_acc_consistent(s, q))
      return false;
  return true;
}

Mas normal_form(const Mas& s) {
  if (s.bottom) return s;
  Mas cur = s;
  bool unchanged = false;
  while (!unchanged) {
    unchanged = true;
    std::vector<StateId> snapshot(cur.states.begin(), cur.states.end());
    for (const StateId& q : snapshot) {
      if (!cur.has_state(q)) continue;
      if (!attracted(cur, q) || !acc_consistent(cur, q)) {
        unchanged = false;
        erase_state(cur, q);
        if (q == cur.initial) return bottom(s.alphabet);
        if (cur.states.empty()) return bottom(s.alphabet);
        continue;
      }
      if (!f_acc_consistent(cur, q)) {
        unchanged = false;
        cur.acc[q].entries.erase(ActionSet{});
      }
      if (!delta_acc_consistent(cur, q)) {
        unchanged = false;
        ActionSet allowed = cur.acc_at(q).union_all();
        auto row = cur.transitions.find(q);
        if (row != cur.transitions.end()) {
          std::erase_if(row->second, [&](const auto& kv) {
            return !allowed.contains(kv.first);
          });
          if (row->second.empty()) cur.transitions.erase(row);
        }
        AcceptanceSet kept;
        for (const ActionSet& x : cur.acc_at(q)) {
          bool all_defined = true;
          for (const Action& a : x)
            if (!cur.step(q, a).has_value()) all_defined = false;
          if (all_defined) kept.insert(x);
        }
        cur.acc[q] = kept;
      }
    }
  }
  return cur;
}

Mas bottom(const std::set<Action>& alphabet) {
  Mas out;
  out.name = "bottom";
  out.alphabet = alphabet;
  out.bottom = true;
  out.initial.clear();
  return out;
}

bool is_bottom(const Mas& s) { return s.bottom; }

}  // namespace mas
