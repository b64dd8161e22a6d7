#include <doctest.h>

#include "helpers.hpp"
#include "mas/normalize.hpp"
#include "mas/oracle.hpp"
#include "mas/semantics.hpp"

using namespace mas;
using mastest::load_aut;
using mastest::load_mas;

TEST_CASE("consistency predicates on S1") {
  Mas s1 = load_mas("s1.mas");
  CHECK(attracted(s1, "0"));
  CHECK(attracted(s1, "1"));  // marked states attract themselves
  CHECK(acc_consistent(s1, "1"));
  CHECK(f_acc_consistent(s1, "1"));
  CHECK(delta_acc_consistent(s1, "1"));
  CHECK(in_normal_form(s1));
  CHECK_THROWS_AS(attracted(s1, "nope"), Error);
}

TEST_CASE("predicates on broken states") {
  Mas s = load_mas("s1.mas");
  s.acc["0"] = AcceptanceSet{};
  CHECK_FALSE(acc_consistent(s, "0"));

  Mas t = load_mas("s1.mas");
  t.states.insert("u");
  t.acc["u"] = AcceptanceSet{ActionSet{}};
  CHECK_FALSE(attracted(t, "u"));
  CHECK_FALSE(f_acc_consistent(t, "u"));  // empty set allowed only if marked

  Mas d;
  d.alphabet = {"a", "b"};
  d.states = {"q"};
  d.initial = "q";
  d.marked = {"q"};
  d.acc["q"] = AcceptanceSet{ActionSet{"a"}, ActionSet{"b"}};
  d.transitions["q"]["a"] = "q";
  CHECK_FALSE(delta_acc_consistent(d, "q"));
}

TEST_CASE("normal form is the identity on S1") {
  Mas s1 = load_mas("s1.mas");
  CHECK(normal_form(s1) == s1);
}

TEST_CASE("normal form removes a dead sink and its feeding action") {
  // S1 over {a,b,c,d} plus an unmarked sink t with acc { {} } behind d.
  Mas s = load_mas("s1.mas");
  s.alphabet.insert("d");
  s.states.insert("t");
  s.acc["t"] = AcceptanceSet{ActionSet{}};
  s.transitions["0"]["d"] = "t";
  // Make the d-transition acceptance-backed so only the sink is at fault.
  s.acc["0"].insert(ActionSet{"a", "d"});

  Mas expected = load_mas("s1.mas");
  expected.alphabet.insert("d");
  Mas got = normal_form(s);
  CHECK(got.states == expected.states);
  CHECK(got.acc == expected.acc);
  CHECK(got.transitions == expected.transitions);
  CHECK(got.marked == expected.marked);
  CHECK(in_normal_form(got));
}

TEST_CASE("normal form collapses to bottom when nothing attracts") {
  Mas s;
  s.alphabet = {"a"};
  s.states = {"q0", "q1"};
  s.initial = "q0";
  s.acc["q0"] = AcceptanceSet{ActionSet{"a"}};
  s.transitions["q0"]["a"] = "q0";
  s.acc["q1"] = AcceptanceSet{ActionSet{}};
  s.marked = {"q1"};  // marked but unreachable from q0
  Mas got = normal_form(s);
  CHECK(is_bottom(got));
}

TEST_CASE("bottom specification") {
  Mas b = bottom({"a", "b", "c"});
  CHECK(is_bottom(b));
  CHECK(normal_form(b) == b);
  CHECK_FALSE(satisfies(load_aut("m_prime.aut"), b).holds);
  CHECK_FALSE(is_bottom(normal_form(load_mas("s1.mas"))));
}

TEST_CASE("normal form is idempotent on fixtures") {
  for (const char* name :
       {"s1.mas", "s2.mas", "no_impl_cycle.mas", "modal_s1.mas", "modal_s2.mas",
        "multi_partner_s1.mas", "multi_partner_s2.mas"}) {
    Mas s = load_mas(name);
    Mas once = normal_form(s);
    CHECK(normal_form(once) == once);
    CHECK(in_normal_form(once));
  }
}

TEST_CASE("normal form preserves bounded model sets on fixtures") {
  for (const char* name : {"s1.mas", "s2.mas", "no_impl_cycle.mas", "modal_s1.mas"}) {
    Mas s = load_mas(name);
    EquivResult r = models_equivalent_bounded(s, normal_form(s), 3);
    CHECK(r.equivalent);
  }
}
