#include "mas/prequotient.hpp"

#include <deque>
#include <vector>

#include "mas/model.hpp"
#include "mas/normalize.hpp"

namespace mas {

namespace {

// All subsets of the given actions, smallest first.
std::vector<ActionSet> subsets(const ActionSet& universe,
                               std::size_t max_size) {
  std::vector<Action> base(universe.begin(), universe.end());
  if (base.size() > max_size)
    throw Error(Error::Kind::CapExceeded,
                "acceptance union too large for candidate enumeration (" +
                    std::to_string(base.size()) + " actions)");
  std::vector<ActionSet> out;
  out.reserve(std::size_t{1} << base.size());
  for (std::size_t mask = 0; mask < (std::size_t{1} << base.size()); ++mask) {
    ActionSet x;
    for (std::size_t i = 0; i < base.size(); ++i)
      if (mask & (std::size_t{1} << i)) x.insert(base[i]);
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace

Mas pre_quotient(const Mas& s1_in, const Mas& s2_in,
                 const PreQuotientLimits& limits) {
  if (s1_in.alphabet != s2_in.alphabet)
    throw Error(Error::Kind::AlphabetMismatch,
                "pre-quotient requires identical alphabets");
  if (s1_in.bottom || s2_in.bottom) return bottom(s1_in.alphabet);
  Mas s1 = in_normal_form(s1_in) ? s1_in : normal_form(s1_in);
  Mas s2 = in_normal_form(s2_in) ? s2_in : normal_form(s2_in);
  if (s1.bottom || s2.bottom) return bottom(s1_in.alphabet);

  Mas out;
  out.name = "prequotient";
  out.alphabet = s1.alphabet;
  out.initial = pair_id(s1.initial, s2.initial);
  std::deque<std::pair<StateId, StateId>> queue{{s1.initial, s2.initial}};
  std::set<std::pair<StateId, StateId>> seen{{s1.initial, s2.initial}};
  while (!queue.empty()) {
    auto [q1, q2] = queue.front();
    queue.pop_front();
    StateId id = pair_id(q1, q2);
    out.states.insert(id);
    if (s1.is_marked(q1) || !s2.is_marked(q2)) out.marked.insert(id);

    const AcceptanceSet& acc1 = s1.acc_at(q1);
    const AcceptanceSet& acc2 = s2.acc_at(q2);
    ActionSet universe = acc1.union_all().intersect(acc2.union_all());
    AcceptanceSet combined;
    for (const ActionSet& x : subsets(universe, limits.max_union_size)) {
      bool good = true;
      for (const ActionSet& x2 : acc2)
        if (!acc1.contains(x.intersect(x2))) {
          good = false;
          break;
        }
      if (good) combined.insert(x);
    }
    ActionSet fireable = combined.union_all();
    out.acc[id] = std::move(combined);
    for (const Action& a : fireable) {
      // Normal-form inputs keep both component transitions defined here.
      std::pair<StateId, StateId> next{*s1.step(q1, a), *s2.step(q2, a)};
      out.transitions[id][a] = pair_id(next.first, next.second);
      if (seen.insert(next).second) queue.push_back(next);
    }
  }
  Mas normalized = normal_form(out);
  normalized.name = "prequotient";
  return normalized;
}

}  // namespace mas
