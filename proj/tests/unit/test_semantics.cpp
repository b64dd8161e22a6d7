#include <doctest.h>

#include "helpers.hpp"
#include "mas/model.hpp"
#include "mas/normalize.hpp"
#include "mas/quotient.hpp"
#include "mas/semantics.hpp"

using namespace mas;
using mastest::load_aut;
using mastest::load_mas;

namespace {

std::set<std::pair<StateId, StateId>> pairs(
    std::initializer_list<std::pair<StateId, StateId>> init) {
  return {init};
}

}  // namespace

TEST_CASE("M' and M'' are models of S1 with the expected witnesses") {
  Mas s1 = load_mas("s1.mas");

  SatResult rp = satisfies(load_aut("m_prime.aut"), s1);
  CHECK(rp.holds);
  CHECK(rp.witness.pairs == pairs({{"0'", "0"}, {"1'", "1"}}));

  SatResult rs = satisfies(load_aut("m_second.aut"), s1);
  CHECK(rs.holds);
  CHECK(rs.witness.pairs ==
        pairs({{"0''", "0"}, {"1''", "0"}, {"2''", "1"}}));
}

TEST_CASE("M11 satisfies S1; its a-only restriction does not terminate") {
  Mas s1 = load_mas("s1.mas");
  Automaton m11 = load_aut("m11.aut");
  CHECK(satisfies(m11, s1).holds);  // {a,c} is in Acc(0)
  CHECK(mastest::sat_bruteforce(m11, s1));

  Automaton restricted = m11;
  restricted.transitions["0"].erase("c");
  SatResult r = satisfies(restricted, s1);
  CHECK_FALSE(r.holds);
  CHECK(r.witness.violation->clause == "automaton is not terminating");
}

TEST_CASE("satisfaction against the bottom specification") {
  CHECK_FALSE(satisfies(load_aut("m_prime.aut"), bottom({"a", "b", "c"})).holds);
}

TEST_CASE("a fired action undefined in the spec is a violation") {
  Mas s;  // deliberately not delta-acc-consistent
  s.alphabet = {"a", "b"};
  s.states = {"q0"};
  s.initial = "q0";
  s.marked = {"q0"};
  s.acc["q0"] = AcceptanceSet{ActionSet{"a", "b"}};
  s.transitions["q0"]["a"] = "q0";

  Automaton m;
  m.alphabet = {"a", "b"};
  m.states = {"r0"};
  m.initial = "r0";
  m.marked = {"r0"};
  m.transitions["r0"]["a"] = "r0";
  m.transitions["r0"]["b"] = "r0";
  SatResult r = satisfies(m, s);
  CHECK_FALSE(r.holds);
  CHECK(r.witness.violation->clause == "transition on 'b' undefined in spec");
}

TEST_CASE("masp satisfaction on the quotient fixture") {
  Masp q = quotient(load_mas("s1.mas"), load_mas("s2.mas"));
  CHECK(satisfies_masp(load_aut("m12.aut"), q).holds);

  SatResult r = satisfies_masp(load_aut("m11.aut"), q);
  CHECK_FALSE(r.holds);
  CHECK(r.witness.violation->clause.find("priority") != std::string::npos);
  CHECK(r.witness.violation->clause.find("unmet") != std::string::npos);
}

TEST_CASE("empty priority conjunction is vacuous") {
  Masp sp{load_mas("s1.mas"), {}};
  CHECK(satisfies_masp(load_aut("m_prime.aut"), sp).holds);
}

TEST_CASE("no_unnecessary") {
  Mas s2 = load_mas("s2.mas");
  CHECK(no_unnecessary(load_aut("m11.aut"), s2).holds);

  // An action outside every acceptance entry of the partner state.
  Mas s = load_mas("s2.mas");
  s.alphabet.insert("d");
  Automaton m = load_aut("m11.aut");
  m.alphabet.insert("d");
  m.transitions["0"]["d"] = "0";
  SatResult r = no_unnecessary(m, s);
  CHECK_FALSE(r.holds);
  CHECK(r.witness.violation->clause == "ready set leaves the acceptance union");
}

TEST_CASE("rho_u prunes exactly the unnecessary transitions") {
  Mas s2 = load_mas("s2.mas");
  Automaton mp = load_aut("m_prime.aut");
  CHECK(bisimilar(rho_u(mp, s2), mp).bisimilar);

  Mas s = load_mas("s2.mas");
  s.alphabet.insert("d");
  Automaton m = load_aut("m_prime.aut");
  m.alphabet.insert("d");
  Automaton with_loop = m;
  with_loop.transitions["0'"]["d"] = "0'";
  Automaton pruned = rho_u(with_loop, s);
  CHECK(no_unnecessary(pruned, s).holds);
  CHECK(bisimilar(pruned, m).bisimilar);
}

TEST_CASE("unreachable model states do not affect satisfaction") {
  Mas s1 = load_mas("s1.mas");
  Automaton m = load_aut("m_prime.aut");
  m.states.insert("junk");
  m.transitions["junk"]["c"] = "junk";  // would violate every clause
  CHECK(satisfies(m, s1).holds);
}
