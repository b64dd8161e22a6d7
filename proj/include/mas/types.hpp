#pragma once

#include <algorithm>
#include <compare>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace mas {

using Action = std::string;
using StateId = std::string;

/// Library-wide error with a machine-readable kind, mapped to exit codes
/// by the CLI.
class Error : public std::runtime_error {
 public:
  enum class Kind {
    UnknownState,
    AlphabetMismatch,
    BottomInput,
    Invalid,       // structural invariant violated
    Parse,         // syntax / validation error with position info
    CapExceeded,   // resource cap (cycle enumeration, candidate count)
    Precondition,  // operation called outside its contract
    Usage,         // bad CLI invocation
  };

  Error(Kind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Finite set of actions. Ordered by (cardinality, lexicographic) so that
/// containers of action sets iterate in the canonical order used by the
/// serializer.
struct ActionSet {
  std::set<Action> items;

  ActionSet() = default;
  ActionSet(std::initializer_list<Action> init) : items(init) {}
  explicit ActionSet(std::set<Action> s) : items(std::move(s)) {}

  bool empty() const { return items.empty(); }
  std::size_t size() const { return items.size(); }
  bool contains(const Action& a) const { return items.count(a) != 0; }
  void insert(const Action& a) { items.insert(a); }

  bool subset_of(const ActionSet& other) const {
    return std::includes(other.items.begin(), other.items.end(),
                         items.begin(), items.end());
  }
  bool strict_subset_of(const ActionSet& other) const {
    return items.size() < other.items.size() && subset_of(other);
  }

  ActionSet intersect(const ActionSet& other) const {
    ActionSet out;
    std::set_intersection(items.begin(), items.end(), other.items.begin(),
                          other.items.end(),
                          std::inserter(out.items, out.items.end()));
    return out;
  }
  ActionSet unite(const ActionSet& other) const {
    ActionSet out = *this;
    out.items.insert(other.items.begin(), other.items.end());
    return out;
  }
  ActionSet minus(const ActionSet& other) const {
    ActionSet out;
    std::set_difference(items.begin(), items.end(), other.items.begin(),
                        other.items.end(),
                        std::inserter(out.items, out.items.end()));
    return out;
  }

  auto begin() const { return items.begin(); }
  auto end() const { return items.end(); }

  friend bool operator==(const ActionSet& l, const ActionSet& r) {
    return l.items == r.items;
  }
  friend bool operator<(const ActionSet& l, const ActionSet& r) {
    if (l.items.size() != r.items.size())
      return l.items.size() < r.items.size();
    return l.items < r.items;
  }
};

/// Acceptance set of a specification state: the ready sets a state of a
/// model implementing it may expose. Entries are kept in canonical
/// (cardinality, lexicographic) order by the ActionSet ordering.
struct AcceptanceSet {
  std::set<ActionSet> entries;

  AcceptanceSet() = default;
  AcceptanceSet(std::initializer_list<ActionSet> init) : entries(init) {}

  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }
  bool contains(const ActionSet& x) const { return entries.count(x) != 0; }
  void insert(ActionSet x) { entries.insert(std::move(x)); }

  /// Union of all entries.
  ActionSet union_all() const {
    ActionSet out;
    for (const ActionSet& x : entries) out.items.insert(x.begin(), x.end());
    return out;
  }

  auto begin() const { return entries.begin(); }
  auto end() const { return entries.end(); }

  friend bool operator==(const AcceptanceSet& l, const AcceptanceSet& r) {
    return l.entries == r.entries;
  }
  friend bool operator<(const AcceptanceSet& l, const AcceptanceSet& r) {
    return l.entries < r.entries;
  }
};

/// Deterministic finite automaton with marked states. Determinism is
/// structural: transitions are keyed by (state, action).
struct Automaton {
  std::string name = "M";
  std::set<Action> alphabet;
  std::set<StateId> states;
  StateId initial;
  std::map<StateId, std::map<Action, StateId>> transitions;
  std::set<StateId> marked;

  bool has_state(const StateId& s) const { return states.count(s) != 0; }
  bool is_marked(const StateId& s) const { return marked.count(s) != 0; }

  /// Transition target, or nullopt when undefined.
  std::optional<StateId> step(const StateId& s, const Action& a) const {
    auto row = transitions.find(s);
    if (row == transitions.end()) return std::nullopt;
    auto it = row->second.find(a);
    if (it == row->second.end()) return std::nullopt;
    return it->second;
  }

  friend bool operator==(const Automaton&, const Automaton&) = default;
};

/// Marked acceptance specification. `bottom` flags the inconsistent
/// specification that admits no model; when set, all other fields except
/// the alphabet are ignored.
struct Mas {
  std::string name = "S";
  std::set<Action> alphabet;
  std::set<StateId> states;
  StateId initial;
  std::map<StateId, std::map<Action, StateId>> transitions;
  std::map<StateId, AcceptanceSet> acc;
  std::set<StateId> marked;
  bool bottom = false;

  bool has_state(const StateId& q) const { return states.count(q) != 0; }
  bool is_marked(const StateId& q) const { return marked.count(q) != 0; }

  std::optional<StateId> step(const StateId& q, const Action& a) const {
    auto row = transitions.find(q);
    if (row == transitions.end()) return std::nullopt;
    auto it = row->second.find(a);
    if (it == row->second.end()) return std::nullopt;
    return it->second;
  }

  const AcceptanceSet& acc_at(const StateId& q) const {
    auto it = acc.find(q);
    if (it == acc.end())
      throw Error(Error::Kind::UnknownState,
                  "no acceptance set for state '" + q + "'");
    return it->second;
  }

  friend bool operator==(const Mas&, const Mas&) = default;
};

/// One priority: a disjunction of (state, action) pairs, at least one of
/// which every model must realize (unless no model state implements any
/// of the named states).
struct PrioritySet {
  std::set<std::pair<StateId, Action>> pairs;

  bool empty() const { return pairs.empty(); }
  auto begin() const { return pairs.begin(); }
  auto end() const { return pairs.end(); }

  friend bool operator==(const PrioritySet& l, const PrioritySet& r) {
    return l.pairs == r.pairs;
  }
  friend bool operator<(const PrioritySet& l, const PrioritySet& r) {
    return l.pairs < r.pairs;
  }
};

/// Marked acceptance specification with priorities: the priorities form a
/// conjunction of PrioritySet disjunctions.
struct Masp {
  Mas base;
  std::set<PrioritySet> priorities;

  friend bool operator==(const Masp&, const Masp&) = default;
};

/// Partial map from states to nonempty action sets describing a loop of a
/// specification.
struct Cycle {
  std::map<StateId, ActionSet> entries;

  bool contains(const StateId& q) const { return entries.count(q) != 0; }
  const ActionSet& at(const StateId& q) const {
    auto it = entries.find(q);
    if (it == entries.end())
      throw Error(Error::Kind::UnknownState,
                  "state '" + q + "' not in cycle");
    return it->second;
  }
  std::set<StateId> domain() const {
    std::set<StateId> out;
    for (const auto& [q, acts] : entries) out.insert(q);
    return out;
  }

  friend bool operator==(const Cycle& l, const Cycle& r) {
    return l.entries == r.entries;
  }
  friend bool operator<(const Cycle& l, const Cycle& r) {
    return l.entries < r.entries;
  }
};

/// First violated clause of a simulation check, for diagnostics.
struct SimViolation {
  StateId left;   // state of the first structure (model side)
  StateId right;  // state of the second structure (specification side)
  std::string clause;
};

/// The (unique, forced) synchronized relation underlying a satisfaction,
/// bisimulation or ~U check. On success `pairs` is exactly the reachable
/// synchronized relation; otherwise `violation` carries the first failure
/// in BFS order from the initial pair.
struct SimWitness {
  std::set<std::pair<StateId, StateId>> pairs;
  std::optional<SimViolation> violation;

  bool ok() const { return !violation.has_value(); }
};

/// Pair-state naming used by product, pre-quotient and unfolding.
inline StateId pair_id(const StateId& left, const StateId& right) {
  return "(" + left + "," + right + ")";
}

}  // namespace mas
