#include "mas/oracle.hpp"

#include <array>
#include <cmath>
#include <cstdint>

#include "mas/dsl.hpp"
#include "mas/model.hpp"
#include "mas/normalize.hpp"
#include "mas/prequotient.hpp"
#include "mas/quotient.hpp"
#include "mas/semantics.hpp"

namespace mas {

namespace {

// ---------------------------------------------------------------------
// Compact fixed-size representation used by the exhaustive loops. The
// semantics mirror the string-based reference operations; the property
// suite cross-checks the two routes on random automata.
// ---------------------------------------------------------------------

constexpr int kMaxActions = 4;
constexpr int kMaxDense = 64;  // bounds products of enumerated models

struct DenseAuto {
  int n = 0;
  int k = 0;
  std::array<int8_t, kMaxDense * kMaxActions> next;
  std::array<uint8_t, kMaxDense> ready;
  uint64_t marked = 0;

  void reset(int states, int actions) {
    n = states;
    k = actions;
    next.fill(-1);
    ready.fill(0);
    marked = 0;
  }
  void set_edge(int s, int a, int t) {
    next[s * kMaxActions + a] = static_cast<int8_t>(t);
    ready[s] = static_cast<uint8_t>(ready[s] | (1u << a));
  }
  int edge(int s, int a) const { return next[s * kMaxActions + a]; }
};

struct DenseSpec {
  bool bottom = false;
  int n = 0;
  int k = 0;
  std::vector<std::array<int8_t, kMaxActions>> next;
  std::vector<std::vector<uint8_t>> acc;  // sorted ready-set masks
  std::vector<uint8_t> union_mask;
  std::vector<char> marked;
  std::vector<std::vector<std::pair<int, int>>> priorities;  // (state, action)
};

uint64_t forward_reach(const DenseAuto& d) {
  uint64_t reach = 1u;
  bool grew = true;
  while (grew) {
    grew = false;
    for (int s = 0; s < d.n; ++s) {
      if (!(reach & (1ull << s))) continue;
      for (int a = 0; a < d.k; ++a) {
        int t = d.edge(s, a);
        if (t >= 0 && !(reach & (1ull << t))) {
          reach |= 1ull << t;
          grew = true;
        }
      }
    }
  }
  return reach;
}

bool dense_terminating(const DenseAuto& d) {
  uint64_t reach = forward_reach(d);
  uint64_t coreach = d.marked;
  bool grew = true;
  while (grew) {
    grew = false;
    for (int s = 0; s < d.n; ++s) {
      if (coreach & (1ull << s)) continue;
      for (int a = 0; a < d.k; ++a) {
        int t = d.edge(s, a);
        if (t >= 0 && (coreach & (1ull << t))) {
          coreach |= 1ull << s;
          grew = true;
          break;
        }
      }
    }
  }
  return (reach & ~coreach) == 0;
}

bool dense_has_deadlock(const DenseAuto& d) {
  uint64_t reach = forward_reach(d);
  for (int s = 0; s < d.n; ++s)
    if ((reach & (1ull << s)) && !(d.marked & (1ull << s)) && d.ready[s] == 0)
      return true;
  return false;
}

bool dense_has_livelock(const DenseAuto& d) {
  uint64_t reach = forward_reach(d);
  // reach_plus[s]: states reachable from s in one or more steps
  std::array<uint64_t, kMaxDense> reach_plus{};
  for (int s = 0; s < d.n; ++s) {
    uint64_t r = 0;
    for (int a = 0; a < d.k; ++a) {
      int t = d.edge(s, a);
      if (t >= 0) r |= 1ull << t;
    }
    reach_plus[s] = r;
  }
  bool grew = true;
  while (grew) {
    grew = false;
    for (int s = 0; s < d.n; ++s) {
      uint64_t r = reach_plus[s];
      uint64_t acc = r;
      for (int t = 0; t < d.n; ++t)
        if (r & (1ull << t)) acc |= reach_plus[t];
      if (acc != r) {
        reach_plus[s] = acc;
        grew = true;
      }
    }
  }
  for (int s = 0; s < d.n; ++s) {
    if (!(reach & (1ull << s))) continue;
    uint64_t cyc = 0;
    for (int t = 0; t < d.n; ++t)
      if ((reach_plus[s] & (1ull << t)) && (reach_plus[t] & (1ull << s)))
        cyc |= 1ull << t;
    if (cyc == 0 || (cyc & d.marked)) continue;
    bool exits = false;
    for (int t = 0; t < d.n && !exits; ++t) {
      if (!(cyc & (1ull << t))) continue;
      for (int a = 0; a < d.k; ++a) {
        int u = d.edge(t, a);
        if (u >= 0 && !(cyc & (1ull << u))) {
          exits = true;
          break;
        }
      }
    }
    if (!exits) return true;
  }
  return false;
}

DenseAuto dense_product(const DenseAuto& a, const DenseAuto& b) {
  DenseAuto out;
  out.k = a.k;
  std::array<int8_t, kMaxDense * kMaxDense> index;
  const int cells = a.n * b.n;
  for (int i = 0; i < cells; ++i) index[i] = -1;
  for (int i = 0; i < cells * kMaxActions; ++i) out.next[i] = -1;
  for (int i = 0; i < cells; ++i) out.ready[i] = 0;
  out.marked = 0;
  std::array<std::pair<int8_t, int8_t>, kMaxDense> stack;
  int count = 0;
  auto intern = [&](int s1, int s2) {
    int8_t& slot = index[s1 * b.n + s2];
    if (slot < 0) {
      slot = static_cast<int8_t>(count);
      stack[count] = {static_cast<int8_t>(s1), static_cast<int8_t>(s2)};
      ++count;
    }
    return slot;
  };
  intern(0, 0);
  for (int i = 0; i < count; ++i) {
    auto [s1, s2] = stack[i];
    if ((a.marked & (1ull << s1)) && (b.marked & (1ull << s2)))
      out.marked |= 1ull << i;
    uint8_t shared = a.ready[s1] & b.ready[s2];
    for (int act = 0; act < a.k; ++act)
      if (shared & (1u << act))
        out.set_edge(i, act, intern(a.edge(s1, act), b.edge(s2, act)));
  }
  out.n = count;
  return out;
}

// Satisfaction clauses; optionally records which model states implement
// each specification state.
bool dense_sat(const DenseAuto& m, const DenseSpec& s,
               std::vector<uint64_t>* implementers = nullptr) {
  if (s.bottom) return false;
  if (implementers) implementers->assign(s.n, 0);
  std::vector<char> seen(static_cast<std::size_t>(m.n) * s.n, 0);
  std::vector<std::pair<int, int>> queue;
  queue.reserve(static_cast<std::size_t>(m.n) * s.n);
  queue.push_back({0, 0});
  seen[0] = 1;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    auto [ms, qs] = queue[i];
    if (implementers) (*implementers)[qs] |= 1ull << ms;
    uint8_t rm = m.ready[ms];
    bool found = false;
    for (uint8_t e : s.acc[qs])
      if (e == rm) {
        found = true;
        break;
      }
    if (!found) return false;
    if ((m.marked & (1ull << ms)) && !s.marked[qs]) return false;
    for (int a = 0; a < m.k; ++a) {
      if (!(rm & (1u << a))) continue;
      int qn = s.next[qs][a];
      if (qn < 0) return false;
      int mn = m.edge(ms, a);
      std::size_t key = static_cast<std::size_t>(mn) * s.n + qn;
      if (!seen[key]) {
        seen[key] = 1;
        queue.push_back({mn, qn});
      }
    }
  }
  return true;
}

bool dense_sat_masp(const DenseAuto& m, const DenseSpec& s) {
  std::vector<uint64_t> impl;
  if (!dense_sat(m, s, &impl)) return false;
  for (const auto& p : s.priorities) {
    bool any = false;
    bool realized = false;
    for (const auto& [q, a] : p) {
      uint64_t bits = impl[q];
      if (bits == 0) continue;
      any = true;
      for (int ms = 0; ms < m.n; ++ms)
        if ((bits & (1ull << ms)) && (m.ready[ms] & (1u << a))) realized = true;
    }
    if (any && !realized) return false;
  }
  return true;
}

// Pruning of unnecessary transitions in the compact representation.
DenseAuto dense_rho_u(const DenseAuto& m, const DenseSpec& s) {
  DenseAuto out;
  out.reset(0, m.k);
  std::vector<int8_t> index(static_cast<std::size_t>(m.n) * s.n, -1);
  std::vector<std::pair<int8_t, int8_t>> stack;
  stack.reserve(kMaxDense);
  auto intern = [&](int ms, int qs) {
    int8_t& slot = index[static_cast<std::size_t>(ms) * s.n + qs];
    if (slot < 0) {
      if (static_cast<int>(stack.size()) >= kMaxDense)
        throw Error(Error::Kind::CapExceeded,
                    "pruned automaton exceeds the compact state bound");
      slot = static_cast<int8_t>(stack.size());
      stack.push_back({static_cast<int8_t>(ms), static_cast<int8_t>(qs)});
    }
    return slot;
  };
  intern(0, 0);
  for (std::size_t i = 0; i < stack.size(); ++i) {
    auto [ms, qs] = stack[i];
    if (m.marked & (1ull << ms)) out.marked |= 1ull << i;
    uint8_t keep = m.ready[ms] & s.union_mask[qs];
    for (int a = 0; a < m.k; ++a) {
      if (!(keep & (1u << a))) continue;
      int qn = s.next[qs][a];
      if (qn < 0) continue;
      out.set_edge(static_cast<int>(i), a, intern(m.edge(ms, a), qn));
    }
  }
  out.n = static_cast<int>(stack.size());
  return out;
}

// Bisimulation-minimized canonical key. Every predicate the suite checks
// on products (deadlock/livelock existence, termination, satisfaction) is
// invariant under bisimulation of either factor, so quantifying over one
// representative per key is exact and keeps the grids small.
uint64_t dense_bisim_key(const DenseAuto& d) {
  if (d.n > 6)
    throw Error(Error::Kind::CapExceeded,
                "bisimulation keys support at most 6 states");
  uint64_t reach = forward_reach(d);
  std::array<int, kMaxDense> cls{};
  std::array<uint64_t, kMaxDense> sig{};
  // initial partition by (marked, ready)
  for (int s = 0; s < d.n; ++s)
    sig[s] = (static_cast<uint64_t>((d.marked >> s) & 1) << 8) | d.ready[s];
  int classes = 0;
  {
    std::map<uint64_t, int> ids;
    for (int s = 0; s < d.n; ++s) {
      if (!(reach & (1ull << s))) continue;
      auto [it, fresh] = ids.emplace(sig[s], classes);
      if (fresh) ++classes;
      cls[s] = it->second;
    }
  }
  while (true) {
    std::map<std::array<int, kMaxActions + 1>, int> ids;
    std::array<int, kMaxDense> next_cls{};
    int next_classes = 0;
    for (int s = 0; s < d.n; ++s) {
      if (!(reach & (1ull << s))) continue;
      std::array<int, kMaxActions + 1> key{};
      key[0] = cls[s];
      for (int a = 0; a < kMaxActions; ++a) {
        int t = (a < d.k) ? d.edge(s, a) : -1;
        key[a + 1] = (t >= 0) ? cls[t] : -1;
      }
      auto [it, fresh] = ids.emplace(key, next_classes);
      if (fresh) ++next_classes;
      next_cls[s] = it->second;
    }
    if (next_classes == classes) break;
    classes = next_classes;
    cls = next_cls;
  }
  // canonical breadth-first renaming of the quotient graph
  std::array<int, kMaxDense> order{};
  std::array<int, kMaxDense> rename{};
  rename.fill(-1);
  int count = 0;
  order[count] = cls[0];
  rename[cls[0]] = count++;
  std::array<int, kMaxDense> rep{};
  rep.fill(-1);
  for (int s = 0; s < d.n; ++s)
    if ((reach & (1ull << s)) && rep[cls[s]] < 0) rep[cls[s]] = s;
  for (int i = 0; i < count; ++i) {
    int s = rep[order[i]];
    for (int a = 0; a < d.k; ++a) {
      int t = d.edge(s, a);
      if (t < 0) continue;
      if (rename[cls[t]] < 0) {
        order[count] = cls[t];
        rename[cls[t]] = count++;
      }
    }
  }
  // pack: 4 bits of size, then per class 1 marked bit + 3 bits per action
  uint64_t key = static_cast<uint64_t>(count) & 0xf;
  int shift = 4;
  for (int i = 0; i < count; ++i) {
    int s = rep[order[i]];
    key |= static_cast<uint64_t>((d.marked >> s) & 1) << shift;
    ++shift;
    for (int a = 0; a < d.k; ++a) {
      int t = d.edge(s, a);
      uint64_t code = (t < 0) ? 7u : static_cast<uint64_t>(rename[cls[t]]);
      key |= code << shift;
      shift += 3;
    }
  }
  return key;
}

Automaton to_automaton(const DenseAuto& d, const std::set<Action>& alphabet) {
  std::vector<Action> acts(alphabet.begin(), alphabet.end());
  Automaton m;
  m.name = "M";
  m.alphabet = alphabet;
  std::vector<StateId> names;
  names.reserve(d.n);
  for (int i = 0; i < d.n; ++i) names.push_back("r" + std::to_string(i));
  m.initial = names[0];
  for (int i = 0; i < d.n; ++i) {
    m.states.insert(names[i]);
    if (d.marked & (1ull << i)) m.marked.insert(names[i]);
    for (int a = 0; a < d.k; ++a)
      if (d.edge(i, a) >= 0)
        m.transitions[names[i]][acts[a]] = names[d.edge(i, a)];
  }
  return m;
}

// State indexing with the initial state at index 0.
std::map<StateId, int> spec_indexing(const Mas& s) {
  std::map<StateId, int> idx;
  idx.emplace(s.initial, 0);
  for (const StateId& q : s.states)
    if (q != s.initial) idx.emplace(q, static_cast<int>(idx.size()));
  return idx;
}

DenseSpec to_dense_spec(const Mas& s) {
  DenseSpec out;
  out.k = static_cast<int>(s.alphabet.size());
  if (s.bottom) {
    out.bottom = true;
    return out;
  }
  std::vector<Action> acts(s.alphabet.begin(), s.alphabet.end());
  auto action_index = [&](const Action& a) {
    return static_cast<int>(std::lower_bound(acts.begin(), acts.end(), a) -
                            acts.begin());
  };
  std::map<StateId, int> idx = spec_indexing(s);
  out.n = static_cast<int>(idx.size());
  out.next.assign(out.n, {});
  for (auto& row : out.next) row.fill(-1);
  out.acc.assign(out.n, {});
  out.union_mask.assign(out.n, 0);
  out.marked.assign(out.n, 0);
  for (const StateId& q : s.states) {
    int qi = idx.at(q);
    if (s.is_marked(q)) out.marked[qi] = 1;
    for (const ActionSet& x : s.acc_at(q)) {
      uint8_t mask = 0;
      for (const Action& a : x)
        mask = static_cast<uint8_t>(mask | (1u << action_index(a)));
      out.acc[qi].push_back(mask);
      out.union_mask[qi] = static_cast<uint8_t>(out.union_mask[qi] | mask);
    }
    auto row = s.transitions.find(q);
    if (row != s.transitions.end())
      for (const auto& [a, t] : row->second)
        out.next[qi][action_index(a)] = static_cast<int8_t>(idx.at(t));
  }
  return out;
}

DenseSpec to_dense_spec(const Masp& sp) {
  DenseSpec out = to_dense_spec(sp.base);
  if (out.bottom) return out;
  std::vector<Action> acts(sp.base.alphabet.begin(), sp.base.alphabet.end());
  std::map<StateId, int> idx = spec_indexing(sp.base);
  for (const PrioritySet& p : sp.priorities) {
    std::vector<std::pair<int, int>> dense_p;
    for (const auto& [q, a] : p) {
      int ai = static_cast<int>(std::lower_bound(acts.begin(), acts.end(), a) -
                                acts.begin());
      dense_p.push_back({idx.at(q), ai});
    }
    out.priorities.push_back(std::move(dense_p));
  }
  return out;
}

bool table_canonical(const std::vector<int>& table, int n, int k) {
  std::vector<int> order;
  order.reserve(n);
  std::vector<bool> discovered(n, false);
  discovered[0] = true;
  order.push_back(0);
  int next_id = 1;
  for (std::size_t idx = 0; idx < order.size(); ++idx) {
    int s = order[idx];
    for (int j = 0; j < k; ++j) {
      int t = table[s * k + j];
      if (t == n || discovered[t]) continue;
      if (t != next_id) return false;  // not the BFS renaming
      discovered[t] = true;
      order.push_back(t);
      ++next_id;
    }
  }
  return next_id == n;  // all states reachable
}

void check_enum_bounds(std::size_t alphabet_size, int max_states,
                       const EnumLimits& limits) {
  if (alphabet_size > static_cast<std::size_t>(kMaxActions))
    throw Error(Error::Kind::Precondition,
                "enumeration supports alphabets of at most 4 actions");
  if (max_states < 1)
    throw Error(Error::Kind::Precondition, "state bound must be positive");
  const int k = static_cast<int>(alphabet_size);
  long double estimate = 0;
  for (int n = 1; n <= max_states; ++n)
    estimate += std::pow(static_cast<long double>(n + 1), n * k) *
                std::pow(2.0L, n);
  if (estimate > static_cast<long double>(limits.max_candidates))
    throw Error(Error::Kind::CapExceeded,
                "candidate estimate " +
                    std::to_string(static_cast<unsigned long long>(estimate)) +
                    " exceeds the enumeration limit " +
                    std::to_string(limits.max_candidates));
}

// Canonical candidates in the compact representation; visit returns false
// to stop.
template <typename F>
void enumerate_dense(int k, int max_states, F&& visit) {
  for (int n = 1; n <= max_states; ++n) {
    std::vector<int> table(static_cast<std::size_t>(n) * k, 0);
    while (true) {
      if (table_canonical(table, n, k)) {
        DenseAuto base;
        base.reset(n, k);
        for (int s = 0; s < n; ++s)
          for (int j = 0; j < k; ++j)
            if (table[s * k + j] != n) base.set_edge(s, j, table[s * k + j]);
        for (uint64_t mask = 0; mask < (1ull << n); ++mask) {
          base.marked = mask;
          if (!visit(static_cast<const DenseAuto&>(base))) return;
        }
      }
      std::size_t i = 0;
      while (i < table.size() && ++table[i] > n) {
        table[i] = 0;
        ++i;
      }
      if (i == table.size()) break;
    }
  }
}

struct ProductFacts {
  std::optional<std::string> deadlock_witness;
  std::optional<std::string> livelock_witness;
  std::optional<std::string> nonterm_witness;
  std::size_t checked = 0;
};

class Suite {
 public:
  Suite(const Mas& s1_in, const Mas& s2_in, const CheckBounds& bounds)
      : bounds_(bounds) {
    s1_ = in_normal_form(s1_in) ? s1_in : normal_form(s1_in);
    s2_ = in_normal_form(s2_in) ? s2_in : normal_form(s2_in);
    alphabet_ = s1_.bottom ? s2_.alphabet : s1_.alphabet;
    ds1_ = to_dense_spec(s1_);
    ds2_ = to_dense_spec(s2_);
  }

  // Declares the theorems about to run so that one enumeration sweep can
  // collect every model set they need.
  void prepare(const std::vector<TheoremName>& names) {
    unsigned needs = 0;
    for (TheoremName name : names) needs |= needs_of(name);
    ensure_models(needs);
  }

  TheoremReport run(TheoremName name) {
    ensure_models(needs_of(name));
    switch (name) {
      case TheoremName::PrequoSound: return prequo_sound();
      case TheoremName::PrequoComplete: return prequo_complete();
      case TheoremName::DeadlockIff: return deadlock_iff();
      case TheoremName::LivelockIff: return livelock_iff();
      case TheoremName::CompatIff: return compat_iff();
      case TheoremName::DeadCorrIff: return dead_corr_iff();
      case TheoremName::LiveCorrIff: return live_corr_iff();
      case TheoremName::QuotientSound: return quotient_sound();
      case TheoremName::QuotientComplete: return quotient_complete();
    }
    throw Error(Error::Kind::Usage, "unknown theorem");
  }

 private:
  enum Need : unsigned {
    NeedS1 = 1u << 0,
    NeedS2 = 1u << 1,
    NeedPq = 1u << 2,
    NeedDc = 1u << 3,
    NeedLc = 1u << 4,
    NeedQt = 1u << 5,
  };

  CheckBounds bounds_;
  Mas s1_, s2_;
  std::set<Action> alphabet_;
  DenseSpec ds1_, ds2_;

  std::optional<Mas> pq_, dc_;
  std::optional<Masp> lc_, qt_;
  std::optional<DenseSpec> dpq_, ddc_, dlc_, dqt_;
  unsigned have_ = 0;
  // One representative per bisimulation class; the s1 flags record which
  // representatives also satisfy the corrections.
  std::vector<DenseAuto> models_s1_, models_s2_, models_pq_, models_qt_;
  std::vector<char> s1_in_dc_, s1_in_lc_;
  std::vector<DenseAuto> dc_outside_s1_, lc_outside_s1_;

  bool completeness_done_ = false;
  std::vector<std::string> pq_incomplete_, qt_incomplete_;
  std::size_t completeness_checked_ = 0;

  static unsigned needs_of(TheoremName name) {
    switch (name) {
      case TheoremName::PrequoSound: return NeedPq | NeedS2;
      case TheoremName::PrequoComplete: return NeedS2;
      case TheoremName::DeadlockIff: return NeedS1 | NeedS2;
      case TheoremName::LivelockIff: return NeedS1 | NeedS2;
      case TheoremName::CompatIff: return NeedS1 | NeedS2;
      case TheoremName::DeadCorrIff: return NeedS1 | NeedS2 | NeedDc;
      case TheoremName::LiveCorrIff: return NeedS1 | NeedS2 | NeedLc;
      case TheoremName::QuotientSound: return NeedS2 | NeedQt;
      case TheoremName::QuotientComplete: return NeedS2;
    }
    return 0;
  }

  const Mas& prequotient() {
    if (!pq_) pq_ = pre_quotient(s1_, s2_);
    return *pq_;
  }
  const Mas& dead_corrected() {
    if (!dc_) dc_ = dead_correction(s1_, s2_);
    return *dc_;
  }
  const Masp& live_corrected() {
    if (!lc_) {
      if (s1_.bottom || s2_.bottom) {
        lc_ = Masp{s1_, {}};
      } else {
        auto [u1, u2] = unfoldings(s1_, s2_);
        lc_ = live_correction(u1, u2, bounds_.cycle_limits);
      }
    }
    return *lc_;
  }
  const Masp& quotiented() {
    if (!qt_) qt_ = quotient(s1_, s2_, bounds_.cycle_limits);
    return *qt_;
  }
  const DenseSpec& dense_pq() {
    if (!dpq_) dpq_ = to_dense_spec(prequotient());
    return *dpq_;
  }
  const DenseSpec& dense_dc() {
    if (!ddc_) ddc_ = to_dense_spec(dead_corrected());
    return *ddc_;
  }
  const DenseSpec& dense_lc() {
    if (!dlc_) dlc_ = to_dense_spec(live_corrected());
    return *dlc_;
  }
  const DenseSpec& dense_qt() {
    if (!dqt_) dqt_ = to_dense_spec(quotiented());
    return *dqt_;
  }

  // One enumeration pass collects every pending model set, reduced to
  // bisimulation representatives; termination is checked once per
  // candidate. The correction memberships ride along with the s1 list so
  // the correction theorems can reuse the shared product grid.
  void ensure_models(unsigned needs) {
    if (needs & (NeedDc | NeedLc)) needs |= NeedS1;
    unsigned pending = needs & ~have_;
    if (!pending) return;
    if (pending & (NeedDc | NeedLc)) pending |= NeedS1;
    const bool want_s1 = pending & NeedS1;
    const bool want_s2 = pending & NeedS2;
    const bool want_pq = pending & NeedPq;
    const bool want_qt = pending & NeedQt;
    const bool want_dc = pending & NeedDc;
    const bool want_lc = pending & NeedLc;
    if (want_s1) {
      models_s1_.clear();
      s1_in_dc_.clear();
      s1_in_lc_.clear();
      dc_outside_s1_.clear();
      lc_outside_s1_.clear();
      grid_.reset();
    }
    const DenseSpec* ddc = want_dc ? &dense_dc() : nullptr;
    const DenseSpec* dlc = want_lc ? &dense_lc() : nullptr;
    const DenseSpec* dpq = want_pq ? &dense_pq() : nullptr;
    const DenseSpec* dqt = want_qt ? &dense_qt() : nullptr;
    have_ |= pending;
    check_enum_bounds(alphabet_.size(), bounds_.model_states,
                      bounds_.enum_limits);
    std::set<uint64_t> s1_keys, s2_keys, pq_keys, qt_keys, dc_keys, lc_keys;
    enumerate_dense(
        static_cast<int>(alphabet_.size()), bounds_.model_states,
        [&](const DenseAuto& m) {
          if (!dense_terminating(m)) return true;
          bool in_s1 = want_s1 && !ds1_.bottom && dense_sat(m, ds1_);
          bool in_dc = want_dc && !ddc->bottom && dense_sat(m, *ddc);
          bool in_lc = want_lc && !dlc->bottom && dense_sat_masp(m, *dlc);
          if (in_s1 && s1_keys.insert(dense_bisim_key(m)).second) {
            models_s1_.push_back(m);
            s1_in_dc_.push_back(in_dc);
            s1_in_lc_.push_back(in_lc);
          }
          if (in_dc && !in_s1 && dc_keys.insert(dense_bisim_key(m)).second)
            dc_outside_s1_.push_back(m);
          if (in_lc && !in_s1 && lc_keys.insert(dense_bisim_key(m)).second)
            lc_outside_s1_.push_back(m);
          if (want_s2 && !ds2_.bottom && dense_sat(m, ds2_) &&
              s2_keys.insert(dense_bisim_key(m)).second)
            models_s2_.push_back(m);
          if (want_pq && !dpq->bottom && dense_sat(m, *dpq) &&
              pq_keys.insert(dense_bisim_key(m)).second)
            models_pq_.push_back(m);
          if (want_qt && !dqt->bottom && dense_sat_masp(m, *dqt) &&
              qt_keys.insert(dense_bisim_key(m)).second)
            models_qt_.push_back(m);
          return true;
        });
  }

  const std::vector<DenseAuto>& models_s2() {
    ensure_models(NeedS2);
    return models_s2_;
  }
  const std::vector<DenseAuto>& models_pq() {
    ensure_models(NeedPq);
    return models_pq_;
  }
  const std::vector<DenseAuto>& models_qt() {
    ensure_models(NeedQt);
    return models_qt_;
  }

  std::string pair_witness(const DenseAuto& m1, const DenseAuto& m2) {
    return compact(to_automaton(m1, alphabet_)) + " x " +
           compact(to_automaton(m2, alphabet_));
  }

  // Facts about every product of s1 and s2 representatives, plus per-row
  // cleanliness used by the correction theorems. Computed once.
  struct GridStats {
    ProductFacts facts;
    std::vector<char> clean_dl, clean_ll;
    std::vector<int> bad_dl_m2, bad_ll_m2;
  };
  std::optional<GridStats> grid_;

  void check_grid_size(std::size_t rows, std::size_t cols) {
    if (rows != 0 && cols != 0 && rows > bounds_.max_grid / cols)
      throw Error(Error::Kind::CapExceeded,
                  "product grid of " + std::to_string(rows) + " x " +
                      std::to_string(cols) +
                      " model representatives exceeds the grid limit " +
                      std::to_string(bounds_.max_grid));
  }

  const GridStats& grid() {
    if (grid_) return *grid_;
    ensure_models(NeedS1 | NeedS2);
    check_grid_size(models_s1_.size(), models_s2_.size());
    GridStats g;
    g.clean_dl.assign(models_s1_.size(), 1);
    g.clean_ll.assign(models_s1_.size(), 1);
    g.bad_dl_m2.assign(models_s1_.size(), -1);
    g.bad_ll_m2.assign(models_s1_.size(), -1);
    for (std::size_t i = 0; i < models_s1_.size(); ++i) {
      for (std::size_t j = 0; j < models_s2_.size(); ++j) {
        if (!g.clean_dl[i] && !g.clean_ll[i] && g.facts.deadlock_witness &&
            g.facts.livelock_witness)
          break;
        ++g.facts.checked;
        DenseAuto p = dense_product(models_s1_[i], models_s2_[j]);
        if (g.clean_dl[i] || !g.facts.deadlock_witness) {
          if (dense_has_deadlock(p)) {
            g.clean_dl[i] = 0;
            if (g.bad_dl_m2[i] < 0) g.bad_dl_m2[i] = static_cast<int>(j);
            if (!g.facts.deadlock_witness)
              g.facts.deadlock_witness =
                  pair_witness(models_s1_[i], models_s2_[j]);
          }
        }
        if (g.clean_ll[i] || !g.facts.livelock_witness) {
          if (dense_has_livelock(p)) {
            g.clean_ll[i] = 0;
            if (g.bad_ll_m2[i] < 0) g.bad_ll_m2[i] = static_cast<int>(j);
            if (!g.facts.livelock_witness)
              g.facts.livelock_witness =
                  pair_witness(models_s1_[i], models_s2_[j]);
          }
        }
      }
    }
    if (g.facts.deadlock_witness)
      g.facts.nonterm_witness = g.facts.deadlock_witness;
    else if (g.facts.livelock_witness)
      g.facts.nonterm_witness = g.facts.livelock_witness;
    grid_ = std::move(g);
    return *grid_;
  }

  // The two completeness theorems share the same hypothesis; one sweep
  // evaluates both conclusions.
  void ensure_completeness() {
    if (completeness_done_) return;
    completeness_done_ = true;
    if (s2_.bottom) return;
    const DenseSpec& dpq = dense_pq();
    const DenseSpec& dqt = dense_qt();
    const auto& m2s = models_s2();
    check_enum_bounds(alphabet_.size(), bounds_.model_states,
                      bounds_.enum_limits);
    enumerate_dense(
        static_cast<int>(alphabet_.size()), bounds_.model_states,
        [&](const DenseAuto& m) {
          ++completeness_checked_;
          for (const DenseAuto& m2 : m2s) {
            DenseAuto p = dense_product(m, m2);
            if (!dense_terminating(p) || !dense_sat(p, ds1_)) return true;
          }
          DenseAuto pruned = dense_rho_u(m, ds2_);
          bool pruned_term = dense_terminating(pruned);
          if (!(pruned_term && dense_sat(pruned, dpq)))
            pq_incomplete_.push_back(compact(to_automaton(m, alphabet_)));
          if (!(pruned_term && dense_sat_masp(pruned, dqt)))
            qt_incomplete_.push_back(compact(to_automaton(m, alphabet_)));
          return true;
        });
  }

  void add_violation(TheoremReport& r, Verdict kind, std::string witness) {
    ++r.violations;
    if (kind == Verdict::HardFail)
      r.verdict = Verdict::HardFail;
    else if (r.verdict == Verdict::Pass)
      r.verdict = Verdict::Suspect;
    if (r.witnesses.size() < bounds_.max_witnesses)
      r.witnesses.push_back(std::move(witness));
  }

  TheoremReport prequo_sound() {
    TheoremReport r;
    r.name = theorem_name(TheoremName::PrequoSound);
    check_grid_size(models_pq().size(), models_s2().size());
    for (const DenseAuto& m : models_pq())
      for (const DenseAuto& m2 : models_s2()) {
        ++r.checked;
        DenseAuto p = dense_product(m, m2);
        if (!dense_terminating(p)) continue;
        if (!dense_sat(p, ds1_))
          add_violation(r, Verdict::HardFail, pair_witness(m, m2));
      }
    return r;
  }

  TheoremReport prequo_complete() {
    TheoremReport r;
    r.name = theorem_name(TheoremName::PrequoComplete);
    if (s2_.bottom) {
      r.note = "skipped: right-hand specification is bottom";
      return r;
    }
    if (models_s2().empty())
      r.note = "hypothesis vacuous: no bounded models of s2";
    ensure_completeness();
    r.checked = completeness_checked_;
    for (const std::string& w : pq_incomplete_)
      add_violation(r, Verdict::Suspect, w);
    return r;
  }

  TheoremReport deadlock_iff() {
    TheoremReport r;
    r.name = theorem_name(TheoremName::DeadlockIff);
    bool lhs = s1_.bottom || s2_.bottom || deadlock_free(s1_, s2_).holds;
    const ProductFacts& facts = grid().facts;
    r.checked = facts.checked;
    if (lhs && facts.deadlock_witness)
      add_violation(r, Verdict::HardFail, *facts.deadlock_witness);
    if (!lhs && facts.deadlock_witness)
      r.note = "verdict not deadlock-free, confirmed by " +
               *facts.deadlock_witness;
    if (!lhs && !facts.deadlock_witness) {
      DeadlockFreeResult df = deadlock_free(s1_, s2_);
      std::string w = "no product deadlock at bound; spec pair (" +
                      df.violations.front().first + "," +
                      df.violations.front().second + ")";
      add_violation(r, Verdict::Suspect, w);
    }
    return r;
  }

  TheoremReport livelock_iff() {
    TheoremReport r;
    r.name = theorem_name(TheoremName::LivelockIff);
    if (s1_.bottom || s2_.bottom) return r;
    auto [u1, u2] = unfoldings(s1_, s2_);
    LivelockFreeResult lf = livelock_free(u1, u2, bounds_.cycle_limits);
    const ProductFacts& facts = grid().facts;
    r.checked = facts.checked;
    if (lf.holds && facts.livelock_witness)
      add_violation(r, Verdict::HardFail, *facts.livelock_witness);
    if (!lf.holds && facts.livelock_witness)
      r.note = "verdict not livelock-free, confirmed by " +
               *facts.livelock_witness;
    if (!lf.holds && !facts.livelock_witness)
      add_violation(r, Verdict::Suspect,
                    "no product livelock at bound; offending cycle " +
                        compact(lf.offenders.front()));
    return r;
  }

  TheoremReport compat_iff() {
    TheoremReport r;
    r.name = theorem_name(TheoremName::CompatIff);
    CompatResult cr = compatible_reachability(s1_, s2_, bounds_.cycle_limits);
    const ProductFacts& facts = grid().facts;
    r.checked = facts.checked;
    if (cr.compatible && facts.nonterm_witness)
      add_violation(r, Verdict::HardFail, *facts.nonterm_witness);
    if (!cr.compatible && facts.nonterm_witness)
      r.note = "verdict incompatible, confirmed by " + *facts.nonterm_witness;
    if (!cr.compatible && !facts.nonterm_witness) {
      std::string reason =
          cr.deadlock_pair
              ? "spec pair (" + cr.deadlock_pair->first + "," +
                    cr.deadlock_pair->second + ")"
              : "offending cycle " + compact(*cr.livelock_cycle);
      add_violation(r, Verdict::Suspect,
                    "no non-terminating product at bound; " + reason);
    }
    return r;
  }

  TheoremReport dead_corr_iff() {
    TheoremReport r;
    r.name = theorem_name(TheoremName::DeadCorrIff);
    ensure_models(NeedDc | NeedS2);
    const GridStats& g = grid();
    r.checked = g.facts.checked + models_s1_.size();
    for (const DenseAuto& m : dc_outside_s1_)
      add_violation(r, Verdict::HardFail,
                    compact(to_automaton(m, alphabet_)) +
                        " satisfies the correction but not s1");
    for (std::size_t i = 0; i < models_s1_.size(); ++i) {
      if (s1_in_dc_[i] && !g.clean_dl[i])
        add_violation(r, Verdict::HardFail,
                      pair_witness(models_s1_[i],
                                   models_s2_[g.bad_dl_m2[i]]));
      if (!s1_in_dc_[i] && g.clean_dl[i])
        add_violation(r, Verdict::Suspect,
                      compact(to_automaton(models_s1_[i], alphabet_)));
    }
    return r;
  }

  TheoremReport live_corr_iff() {
    TheoremReport r;
    r.name = theorem_name(TheoremName::LiveCorrIff);
    if (s1_.bottom || s2_.bottom) return r;
    ensure_models(NeedLc | NeedS2);
    const GridStats& g = grid();
    r.checked = g.facts.checked + models_s1_.size();
    for (const DenseAuto& m : lc_outside_s1_)
      add_violation(r, Verdict::HardFail,
                    compact(to_automaton(m, alphabet_)) +
                        " satisfies the correction but not s1");
    for (std::size_t i = 0; i < models_s1_.size(); ++i) {
      if (s1_in_lc_[i] && !g.clean_ll[i])
        add_violation(r, Verdict::HardFail,
                      pair_witness(models_s1_[i],
                                   models_s2_[g.bad_ll_m2[i]]));
      if (!s1_in_lc_[i] && g.clean_ll[i])
        add_violation(r, Verdict::Suspect,
                      compact(to_automaton(models_s1_[i], alphabet_)));
    }
    return r;
  }

  TheoremReport quotient_sound() {
    TheoremReport r;
    r.name = theorem_name(TheoremName::QuotientSound);
    check_grid_size(models_qt().size(), models_s2().size());
    for (const DenseAuto& m : models_qt())
      for (const DenseAuto& m2 : models_s2()) {
        ++r.checked;
        DenseAuto p = dense_product(m, m2);
        if (!dense_terminating(p))
          add_violation(r, Verdict::HardFail,
                        pair_witness(m, m2) + " product not terminating");
        else if (!dense_sat(p, ds1_))
          add_violation(r, Verdict::HardFail, pair_witness(m, m2));
      }
    return r;
  }

  TheoremReport quotient_complete() {
    TheoremReport r;
    r.name = theorem_name(TheoremName::QuotientComplete);
    if (s2_.bottom) {
      r.note = "skipped: right-hand specification is bottom";
      return r;
    }
    if (models_s2().empty())
      r.note = "hypothesis vacuous: no bounded models of s2";
    ensure_completeness();
    r.checked = completeness_checked_;
    for (const std::string& w : qt_incomplete_)
      add_violation(r, Verdict::Suspect, w);
    return r;
  }
};

}  // namespace

void enumerate_automata(const std::set<Action>& alphabet, int max_states,
                        const std::function<bool(const Automaton&)>& visit,
                        const EnumLimits& limits) {
  check_enum_bounds(alphabet.size(), max_states, limits);
  enumerate_dense(static_cast<int>(alphabet.size()), max_states,
                  [&](const DenseAuto& d) {
                    return visit(to_automaton(d, alphabet));
                  });
}

void enumerate_models(const Mas& s, int max_states,
                      const std::function<bool(const Automaton&)>& visit,
                      const EnumLimits& limits) {
  if (s.bottom) return;
  check_enum_bounds(s.alphabet.size(), max_states, limits);
  DenseSpec ds = to_dense_spec(s);
  enumerate_dense(static_cast<int>(s.alphabet.size()), max_states,
                  [&](const DenseAuto& d) {
                    if (!dense_terminating(d)) return true;
                    if (!dense_sat(d, ds)) return true;
                    return visit(to_automaton(d, s.alphabet));
                  });
}

void enumerate_models(const Masp& sp, int max_states,
                      const std::function<bool(const Automaton&)>& visit,
                      const EnumLimits& limits) {
  if (sp.base.bottom) return;
  check_enum_bounds(sp.base.alphabet.size(), max_states, limits);
  DenseSpec ds = to_dense_spec(sp);
  enumerate_dense(static_cast<int>(sp.base.alphabet.size()), max_states,
                  [&](const DenseAuto& d) {
                    if (!dense_terminating(d)) return true;
                    if (!dense_sat_masp(d, ds)) return true;
                    return visit(to_automaton(d, sp.base.alphabet));
                  });
}

EquivResult models_equivalent_bounded(const Mas& sa, const Mas& sb,
                                      int max_states,
                                      const EnumLimits& limits) {
  if (!sa.bottom && !sb.bottom && sa.alphabet != sb.alphabet)
    throw Error(Error::Kind::AlphabetMismatch,
                "model comparison requires identical alphabets");
  EquivResult out{true, std::nullopt, false};
  if (sa.bottom && sb.bottom) return out;
  const std::set<Action>& alphabet = sa.bottom ? sb.alphabet : sa.alphabet;
  check_enum_bounds(alphabet.size(), max_states, limits);
  DenseSpec da = to_dense_spec(sa);
  DenseSpec db = to_dense_spec(sb);
  enumerate_dense(static_cast<int>(alphabet.size()), max_states,
                  [&](const DenseAuto& d) {
                    bool term = dense_terminating(d);
                    bool in_a = term && dense_sat(d, da);
                    bool in_b = term && dense_sat(d, db);
                    if (in_a != in_b) {
                      out.equivalent = false;
                      out.distinguishing = to_automaton(d, alphabet);
                      out.satisfies_first = in_a;
                      return false;
                    }
                    return true;
                  });
  return out;
}

const std::vector<TheoremName>& all_theorems() {
  static const std::vector<TheoremName> names = {
      TheoremName::PrequoSound,   TheoremName::PrequoComplete,
      TheoremName::DeadlockIff,   TheoremName::LivelockIff,
      TheoremName::CompatIff,     TheoremName::DeadCorrIff,
      TheoremName::LiveCorrIff,   TheoremName::QuotientSound,
      TheoremName::QuotientComplete,
  };
  return names;
}

std::string theorem_name(TheoremName name) {
  switch (name) {
    case TheoremName::PrequoSound: return "prequo_sound";
    case TheoremName::PrequoComplete: return "prequo_complete";
    case TheoremName::DeadlockIff: return "deadlock_iff";
    case TheoremName::LivelockIff: return "livelock_iff";
    case TheoremName::CompatIff: return "compat_iff";
    case TheoremName::DeadCorrIff: return "dead_corr_iff";
    case TheoremName::LiveCorrIff: return "live_corr_iff";
    case TheoremName::QuotientSound: return "quotient_sound";
    case TheoremName::QuotientComplete: return "quotient_complete";
  }
  return "unknown";
}

std::optional<TheoremName> theorem_from_string(const std::string& text) {
  for (TheoremName name : all_theorems())
    if (theorem_name(name) == text) return name;
  return std::nullopt;
}

std::string report_line(const TheoremReport& report) {
  std::string verdict;
  switch (report.verdict) {
    case Verdict::Pass: verdict = "PASS"; break;
    case Verdict::HardFail: verdict = "HARD-FAIL"; break;
    case Verdict::Suspect: verdict = "SUSPECT"; break;
  }
  std::string line = "THEOREM " + report.name + " " + verdict;
  if (!report.witnesses.empty()) line += " witness=" + report.witnesses.front();
  return line;
}

std::vector<TheoremReport> check_theorems(const std::vector<TheoremName>& names,
                                          const Mas& s1, const Mas& s2,
                                          const CheckBounds& bounds) {
  Suite suite(s1, s2, bounds);
  suite.prepare(names);
  std::vector<TheoremReport> out;
  out.reserve(names.size());
  for (TheoremName name : names) out.push_back(suite.run(name));
  return out;
}

TheoremReport check_theorem(TheoremName name, const Mas& s1, const Mas& s2,
                            const CheckBounds& bounds) {
  return check_theorems({name}, s1, s2, bounds).front();
}

Automaton random_automaton(std::mt19937_64& rng,
                           const std::set<Action>& alphabet, int max_states) {
  int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_states));
  Automaton m;
  m.name = "M";
  m.alphabet = alphabet;
  for (int i = 0; i < n; ++i) m.states.insert("r" + std::to_string(i));
  m.initial = "r0";
  for (int i = 0; i < n; ++i) {
    for (const Action& a : alphabet) {
      if (rng() % 2 == 0) continue;
      m.transitions["r" + std::to_string(i)][a] =
          "r" + std::to_string(rng() % static_cast<unsigned>(n));
    }
    if (rng() % 3 == 0) m.marked.insert("r" + std::to_string(i));
  }
  return m;
}

Mas random_normal_mas(std::mt19937_64& rng, const std::set<Action>& alphabet,
                      int max_states) {
  while (true) {
    int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_states));
    Mas s;
    s.name = "S";
    s.alphabet = alphabet;
    for (int i = 0; i < n; ++i) s.states.insert("q" + std::to_string(i));
    s.initial = "q0";
    for (int i = 0; i < n; ++i) {
      StateId q = "q" + std::to_string(i);
      AcceptanceSet as;
      int entries = 1 + static_cast<int>(rng() % 3);
      for (int e = 0; e < entries; ++e) {
        ActionSet x;
        for (const Action& a : alphabet)
          if (rng() % 2 == 0) x.insert(a);
        as.insert(std::move(x));
      }
      s.acc[q] = as;
      for (const Action& a : as.union_all())
        s.transitions[q][a] =
            "q" + std::to_string(rng() % static_cast<unsigned>(n));
      if (rng() % 5 < 2) s.marked.insert(q);
    }
    if (s.marked.empty())
      s.marked.insert("q" + std::to_string(rng() % static_cast<unsigned>(n)));
    Mas normalized = normal_form(s);
    if (!normalized.bottom) {
      normalized.name = "S";
      return normalized;
    }
  }
}

Mas random_mas_with_models(std::mt19937_64& rng,
                           const std::set<Action>& alphabet, int max_states,
                           int model_bound, int max_tries,
                           std::size_t max_models) {
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    Mas s = random_normal_mas(rng, alphabet, max_states);
    std::size_t count = 0;
    enumerate_models(s, model_bound, [&](const Automaton&) {
      ++count;
      return max_models == 0 || count <= max_models;
    });
    if (count >= 1 && (max_models == 0 || count <= max_models)) return s;
  }
  throw Error(Error::Kind::CapExceeded,
              "could not generate a specification with bounded models");
}

}  // namespace mas
