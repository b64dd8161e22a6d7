#include <doctest.h>

#include "helpers.hpp"
#include "mas/compat.hpp"
#include "mas/model.hpp"
#include "mas/normalize.hpp"
#include "mas/prequotient.hpp"
#include "mas/quotient.hpp"
#include "mas/semantics.hpp"

using namespace mas;
using mastest::load_aut;
using mastest::load_mas;

namespace {

PrioritySet prio(std::initializer_list<std::pair<StateId, Action>> init) {
  PrioritySet p;
  for (const auto& [q, a] : init) p.pairs.insert({q, a});
  return p;
}

Cycle cycle_of(std::initializer_list<std::pair<StateId, ActionSet>> init) {
  Cycle c;
  for (const auto& [q, acts] : init) c.entries[q] = acts;
  return c;
}

}  // namespace

TEST_CASE("dead_correction leaves deadlock-free pairs untouched") {
  Mas s1 = load_mas("s1.mas");
  Mas s2 = load_mas("s2.mas");
  CHECK(dead_correction(s1, s2) == s1);
}

TEST_CASE("dead_correction filters acceptance entries") {
  Mas s1;
  s1.alphabet = {"a", "b"};
  s1.states = {"q"};
  s1.initial = "q";
  s1.marked = {"q"};
  s1.acc["q"] = AcceptanceSet{ActionSet{"a"}, ActionSet{"b"}};
  s1.transitions["q"]["a"] = "q";
  s1.transitions["q"]["b"] = "q";

  Mas s2;
  s2.alphabet = {"a", "b"};
  s2.states = {"u"};
  s2.initial = "u";
  s2.marked = {"u"};
  s2.acc["u"] = AcceptanceSet{ActionSet{"b"}};
  s2.transitions["u"]["b"] = "u";

  Mas corrected = dead_correction(s1, s2);
  CHECK(corrected.acc.at("q") == AcceptanceSet{ActionSet{"b"}});
  CHECK_FALSE(corrected.step("q", "a").has_value());  // normalization pruned it
  CHECK(in_normal_form(corrected));
}

TEST_CASE("dead_correction can empty the specification") {
  Mas s1;
  s1.alphabet = {"a"};
  s1.states = {"q0", "q1"};
  s1.initial = "q0";
  s1.acc["q0"] = AcceptanceSet{ActionSet{"a"}};
  s1.transitions["q0"]["a"] = "q1";
  s1.acc["q1"] = AcceptanceSet{ActionSet{}};
  s1.marked = {"q1"};

  Mas s2;
  s2.alphabet = {"a"};
  s2.states = {"u"};
  s2.initial = "u";
  s2.acc["u"] = AcceptanceSet{ActionSet{}};
  s2.marked = {"u"};

  CHECK(is_bottom(dead_correction(s1, s2)));
}

TEST_CASE("live_corr_cycle adds the forcing priorities") {
  Mas s2 = load_mas("s2.mas");
  Mas pq = pre_quotient(load_mas("s1.mas"), s2);
  PartnerMap pm = partners(pq, s2);
  Cycle c1 = cycle_of({{pair_id("0", "0'"), ActionSet{"a"}}});
  Cycle c2 = cycle_of({{"0'", ActionSet{"a"}}});

  Masp out = live_corr_cycle(Masp{pq, {}}, c1, s2, c2, pm);
  CHECK(out.base == pq);
  CHECK(out.priorities ==
        std::set<PrioritySet>{
            prio({{pair_id("0", "0'"), "b"}}),
            prio({{pair_id("0", "0'"), "b"}, {pair_id("0", "0'"), "c"}})});
}

TEST_CASE("live_corr_cycle covers optional exits of an unmarked cycle") {
  // Partner spec: unmarked a-cycle whose only exit is optional b.
  Mas s2;
  s2.alphabet = {"a", "b", "c"};
  s2.states = {"0'", "1'"};
  s2.initial = "0'";
  s2.acc["0'"] = AcceptanceSet{ActionSet{"a"}, ActionSet{"a", "b"}};
  s2.transitions["0'"]["a"] = "0'";
  s2.transitions["0'"]["b"] = "1'";
  s2.acc["1'"] = AcceptanceSet{ActionSet{}};
  s2.marked = {"1'"};

  Mas s1;
  s1.alphabet = {"a", "b", "c"};
  s1.states = {"A", "B"};
  s1.initial = "A";
  s1.acc["A"] =
      AcceptanceSet{ActionSet{"a"}, ActionSet{"a", "b"}, ActionSet{"a", "c"}};
  s1.transitions["A"]["a"] = "A";
  s1.transitions["A"]["b"] = "B";
  s1.transitions["A"]["c"] = "B";
  s1.acc["B"] = AcceptanceSet{ActionSet{}};
  s1.marked = {"B"};

  PartnerMap pm = partners(s1, s2);
  Cycle c1 = cycle_of({{"A", ActionSet{"a"}}});
  Cycle c2 = cycle_of({{"0'", ActionSet{"a"}}});
  TransitionFamilies f2 = transition_families(s2, c2);
  REQUIRE(f2.a_map.empty());
  REQUIRE(f2.o_map.at("0'") == AcceptanceSet{ActionSet{"b"}});

  Masp out = live_corr_cycle(Masp{s1, {}}, c1, s2, c2, pm);
  CHECK(out.priorities.empty());
  CHECK(out.base.acc.at("A") == AcceptanceSet{ActionSet{"a", "b"}});
  CHECK_FALSE(out.base.step("A", "c").has_value());
  CHECK(in_normal_form(out.base));
}

TEST_CASE("live_corr_cycle falls back to cutting the cycle") {
  // Partner cycle is marked and has no mandatory exits: the only repair is
  // to drop every acceptance entry that re-enters the cycle.
  Mas s2;
  s2.alphabet = {"a", "b", "c"};
  s2.states = {"0'", "1'"};
  s2.initial = "0'";
  s2.acc["0'"] = AcceptanceSet{ActionSet{"a"}, ActionSet{"a", "b"}};
  s2.transitions["0'"]["a"] = "0'";
  s2.transitions["0'"]["b"] = "1'";
  s2.acc["1'"] = AcceptanceSet{ActionSet{}};
  s2.marked = {"0'", "1'"};

  Mas s1;
  s1.alphabet = {"a", "b", "c"};
  s1.states = {"A", "B"};
  s1.initial = "A";
  s1.acc["A"] =
      AcceptanceSet{ActionSet{"b"}, ActionSet{"a", "b"}, ActionSet{"a", "c"}};
  s1.transitions["A"]["a"] = "A";
  s1.transitions["A"]["b"] = "B";
  s1.transitions["A"]["c"] = "B";
  s1.acc["B"] = AcceptanceSet{ActionSet{}};
  s1.marked = {"B"};

  PartnerMap pm = partners(s1, s2);
  Cycle c1 = cycle_of({{"A", ActionSet{"a"}}});
  Cycle c2 = cycle_of({{"0'", ActionSet{"a"}}});

  Masp out = live_corr_cycle(Masp{s1, {}}, c1, s2, c2, pm);
  CHECK(out.priorities.empty());
  CHECK(out.base.acc.at("A") == AcceptanceSet{ActionSet{"b"}});
  CHECK_FALSE(out.base.step("A", "a").has_value());
  CHECK(in_normal_form(out.base));
}

TEST_CASE("live_correction folds the offending cycles") {
  Mas s2 = load_mas("s2.mas");
  Mas pq = pre_quotient(load_mas("s1.mas"), s2);
  Masp out = live_correction(pq, s2);
  CHECK(out.base == pq);
  CHECK(out.priorities.size() == 2);

  // Acyclic left side: no corrections.
  Masp acyclic = live_correction(load_mas("modal_s1.mas"),
                                 load_mas("modal_s2.mas"));
  CHECK(acyclic.priorities.empty());
  CHECK(acyclic.base == load_mas("modal_s1.mas"));

  // A live cycle short-circuits the fold.
  Masp self = live_correction(s2, s2);
  CHECK(self.priorities.empty());
  CHECK(self.base == s2);
}

TEST_CASE("rho_t composes the corrections over the unfoldings") {
  Mas s1 = load_mas("s1.mas");
  Mas s2 = load_mas("s2.mas");
  Mas pq = pre_quotient(s1, s2);
  Masp out = rho_t(pq, s2);
  CHECK(bisimilar(underlying(out.base), underlying(pq)).bisimilar);
  CHECK(out.priorities.size() == 2);
  for (const PrioritySet& p : out.priorities)
    for (const auto& [q, a] : p) CHECK(out.base.has_state(q));

  CHECK(is_bottom(rho_t(bottom(s1.alphabet), s2).base));

  // Already compatible: identity modulo the unfolding renaming.
  Mas trivial;
  trivial.alphabet = {"a"};
  trivial.states = {"q"};
  trivial.initial = "q";
  trivial.acc["q"] = AcceptanceSet{ActionSet{}};
  trivial.marked = {"q"};
  Masp same = rho_t(trivial, trivial);
  CHECK(same.priorities.empty());
  CHECK(bisimilar(underlying(same.base), underlying(trivial)).bisimilar);
}

TEST_CASE("quotient of S1 by S2 rejects M11 and accepts M12") {
  Masp q = quotient(load_mas("s1.mas"), load_mas("s2.mas"));
  CHECK_FALSE(satisfies_masp(load_aut("m11.aut"), q).holds);
  CHECK(satisfies_masp(load_aut("m12.aut"), q).holds);
  CHECK(q.priorities.size() == 2);
  validate(q);
}

TEST_CASE("quotient of the modal pair") {
  Masp q = quotient(load_mas("modal_s1.mas"), load_mas("modal_s2.mas"));
  AcceptanceSet expected{ActionSet{"a"},      ActionSet{"b"},
                         ActionSet{"a", "b"}, ActionSet{"a", "c"},
                         ActionSet{"b", "c"}, ActionSet{"a", "b", "c"}};
  CHECK(q.base.acc.at(q.base.initial) == expected);
  CHECK(q.priorities.empty());
}

TEST_CASE("quotient of a trivial specification by itself") {
  Mas trivial;
  trivial.alphabet = {"a"};
  trivial.states = {"q"};
  trivial.initial = "q";
  trivial.acc["q"] = AcceptanceSet{ActionSet{}};
  trivial.marked = {"q"};
  Masp q = quotient(trivial, trivial);
  CHECK(q.priorities.empty());
  CHECK(q.base.states.size() == 1);
  CHECK(q.base.acc.at(q.base.initial) == AcceptanceSet{ActionSet{}});
  CHECK(q.base.marked == q.base.states);
}
