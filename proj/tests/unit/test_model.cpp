#include <doctest.h>

#include "helpers.hpp"
#include "mas/model.hpp"
#include "mas/normalize.hpp"

using namespace mas;
using mastest::load_aut;
using mastest::load_mas;

TEST_CASE("ready sets") {
  Mas s1 = load_mas("s1.mas");
  CHECK(ready(s1, "0") == ActionSet{"a", "b", "c"});
  CHECK(ready(s1, "1") == ActionSet{});

  Automaton mp = load_aut("m_prime.aut");
  CHECK(ready(mp, "0'") == ActionSet{"a", "b"});
  CHECK(ready(mp, "1'") == ActionSet{});

  Automaton iso = mp;
  iso.states.insert("fresh");
  CHECK(ready(iso, "fresh") == ActionSet{});

  CHECK_THROWS_AS(ready(mp, "nope"), Error);
}

TEST_CASE("reachability sets on M'") {
  Automaton mp = load_aut("m_prime.aut");
  ReachabilitySets r0 = reachability_sets(mp, "0'");
  CHECK(r0.cycle == std::set<StateId>{"0'"});
  CHECK(r0.pre == std::set<StateId>{"0'"});
  CHECK(r0.post == std::set<StateId>{"0'", "1'"});

  ReachabilitySets r1 = reachability_sets(mp, "1'");
  CHECK(r1.cycle.empty());
  CHECK(r1.pre == std::set<StateId>{"0'", "1'"});
  CHECK(r1.post == std::set<StateId>{"1'"});
}

TEST_CASE("reachability sets on an isolated state") {
  Automaton m;
  m.alphabet = {"a"};
  m.states = {"s"};
  m.initial = "s";
  ReachabilitySets r = reachability_sets(m, "s");
  CHECK(r.pre == std::set<StateId>{"s"});
  CHECK(r.post == std::set<StateId>{"s"});
  CHECK(r.pre_plus.empty());
  CHECK(r.post_plus.empty());
  CHECK(r.cycle.empty());
}

TEST_CASE("product of M' and M''") {
  Automaton mp = load_aut("m_prime.aut");
  Automaton ms = load_aut("m_second.aut");
  Automaton p = product(mp, ms);
  // The two automata only synchronize on a, alternating 0'' and 1''.
  CHECK(p.states ==
        std::set<StateId>{pair_id("0'", "0''"), pair_id("0'", "1''")});
  CHECK(p.marked.empty());
  CHECK(p.initial == pair_id("0'", "0''"));
}

TEST_CASE("product requires one alphabet") {
  Automaton mp = load_aut("m_prime.aut");
  Automaton other = mp;
  other.alphabet = {"a", "b"};
  CHECK_THROWS_AS(product(mp, other), Error);
}

TEST_CASE("product of M11 and M' livelocks") {
  Automaton m11 = load_aut("m11.aut");
  Automaton mp = load_aut("m_prime.aut");
  Automaton p = product(m11, mp);
  CHECK(p.states.size() == 1);
  CHECK(p.marked.empty());
  StateId s = *p.states.begin();
  CHECK(classify_state(p, s) == StateClass::InLivelock);
  TerminationResult t = is_terminating(p);
  CHECK_FALSE(t.terminating);
  CHECK(t.offenders == std::vector<StateId>{s});
}

TEST_CASE("bisimilarity") {
  Automaton mp = load_aut("m_prime.aut");
  Automaton ms = load_aut("m_second.aut");
  CHECK(bisimilar(mp, mp).bisimilar);

  BisimResult r = bisimilar(mp, ms);
  CHECK_FALSE(r.bisimilar);
  CHECK(r.witness.violation->clause == "ready sets differ");
  CHECK(r.witness.violation->left == "0'");
  CHECK(r.witness.violation->right == "0''");

  // idempotence of the product up to bisimilarity
  CHECK(bisimilar(product(ms, ms), ms).bisimilar);
}

TEST_CASE("state classification") {
  Automaton mp = load_aut("m_prime.aut");
  CHECK(classify_state(mp, "1'") == StateClass::Normal);
  CHECK(classify_state(mp, "0'") == StateClass::Normal);

  Automaton sink;
  sink.alphabet = {"a"};
  sink.states = {"s"};
  sink.initial = "s";
  CHECK(classify_state(sink, "s") == StateClass::Deadlock);
  sink.marked = {"s"};
  CHECK(classify_state(sink, "s") == StateClass::Normal);

  Automaton two = sink;
  two.states.insert("u");
  CHECK(classify_state(two, "u") == StateClass::Unreachable);
  CHECK_THROWS_AS(classify_state(two, "nope"), Error);
}

TEST_CASE("termination") {
  CHECK(is_terminating(load_aut("m_prime.aut")).terminating);

  Automaton empty_lang;
  empty_lang.alphabet = {"a"};
  empty_lang.states = {"s"};
  empty_lang.initial = "s";
  empty_lang.marked = {"s"};
  CHECK(is_terminating(empty_lang).terminating);
  CHECK(can_all_reach_marked(empty_lang));
}

TEST_CASE("underlying automaton") {
  Mas s1 = load_mas("s1.mas");
  Automaton u = underlying(s1);
  CHECK(u.states.size() == 2);
  CHECK(u.marked == std::set<StateId>{"1"});
  std::size_t transitions = 0;
  for (const auto& [src, row] : u.transitions) transitions += row.size();
  CHECK(transitions == 3);

  CHECK_THROWS_AS(underlying(bottom({"a"})), Error);

  Mas tiny;
  tiny.alphabet = {"a"};
  tiny.states = {"q"};
  tiny.initial = "q";
  tiny.acc["q"] = AcceptanceSet{ActionSet{}};
  tiny.marked = {"q"};
  Automaton ut = underlying(tiny);
  CHECK(ut.states == std::set<StateId>{"q"});
  CHECK(ut.marked == std::set<StateId>{"q"});
  CHECK(ut.transitions.empty());
}

TEST_CASE("gc drops unreachable states") {
  Automaton m = load_aut("m_prime.aut");
  m.states.insert("zombie");
  m.transitions["zombie"]["a"] = "0'";
  m.marked.insert("zombie");
  Automaton trimmed = gc(m);
  CHECK(trimmed.states == std::set<StateId>{"0'", "1'"});
  CHECK(trimmed.marked == std::set<StateId>{"1'"});
}

TEST_CASE("validation rejects broken structures") {
  Automaton m = load_aut("m_prime.aut");
  m.transitions["0'"]["d"] = "1'";
  CHECK_THROWS_AS(validate(m), Error);

  Mas s = load_mas("s1.mas");
  s.acc.erase("1");
  CHECK_THROWS_AS(validate(s), Error);

  Masp sp{load_mas("s1.mas"), {}};
  PrioritySet p;
  p.pairs.insert({"ghost", "a"});
  sp.priorities.insert(p);
  CHECK_THROWS_AS(validate(sp), Error);
}
