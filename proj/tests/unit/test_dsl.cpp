#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "mas/cli.hpp"
#include "mas/compat.hpp"
#include "mas/dsl.hpp"
#include "mas/normalize.hpp"
#include "mas/prequotient.hpp"
#include "mas/quotient.hpp"

using namespace mas;
using mastest::fixture_path;
using mastest::load_aut;
using mastest::load_mas;
using mastest::read_file;

TEST_CASE("parsing S1 yields the expected structure") {
  Mas s1 = load_mas("s1.mas");
  CHECK(s1.name == "S1");
  CHECK(s1.alphabet == std::set<Action>{"a", "b", "c"});
  CHECK(s1.states == std::set<StateId>{"0", "1"});
  CHECK(s1.initial == "0");
  CHECK(s1.marked == std::set<StateId>{"1"});
  CHECK(s1.acc.at("0") ==
        AcceptanceSet{ActionSet{"a"}, ActionSet{"a", "b"},
                      ActionSet{"a", "c"}});
  CHECK(s1.acc.at("1") == AcceptanceSet{ActionSet{}});
  CHECK(s1.step("0", "a") == StateId("0"));
  CHECK(s1.step("0", "b") == StateId("1"));
}

TEST_CASE("fixture files are in canonical form") {
  for (const char* name :
       {"s1.mas", "s2.mas", "no_impl_cycle.mas", "modal_s1.mas", "modal_s2.mas",
        "multi_partner_s1.mas", "multi_partner_s2.mas", "m_prime.aut",
        "m_second.aut", "m11.aut", "m12.aut"}) {
    std::string text = read_file(fixture_path(name));
    CHECK(serialize(parse(text)) == text);
  }
}

TEST_CASE("round trips through the canonical form") {
  for (const char* name : {"s1.mas", "s2.mas", "m_prime.aut"}) {
    ParsedValue v = mastest::load(name);
    CHECK(parse(serialize(v)) == v);
    CHECK(serialize(parse(serialize(v))) == serialize(v));
  }

  Masp q = quotient(load_mas("s1.mas"), load_mas("s2.mas"));
  ParsedValue round = parse(serialize(q));
  CHECK(std::get<Masp>(round) == q);

  Mas b = bottom({"a", "b"});
  CHECK(std::get<Mas>(parse(serialize(b))) == b);
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_WITH_AS(
      parse("alphabet: a\n\nautomaton M {\n  init q0\n  state q0\n"
            "  q0 -a-> q0\n  q0 -a-> q0\n}\n"),
      doctest::Contains("7:3"), Error);
  CHECK_THROWS_WITH_AS(
      parse("alphabet: a\n\nautomaton M {\n  init q0\n  state q0\n"
            "  q0 -z-> q0\n}\n"),
      doctest::Contains("unknown action"), Error);
  CHECK_THROWS_WITH_AS(
      parse("alphabet: a\n\nmas S {\n  init q0\n  state q0\n}\n"),
      doctest::Contains("no acceptance set"), Error);
  CHECK_THROWS_WITH_AS(
      parse("alphabet: a\n\nmasp S {\n  init q0\n  state q0 acc { {a} }\n"
            "  q0 -a-> q0\n  priority { (q9,a) }\n}\n"),
      doctest::Contains("unknown state"), Error);
  CHECK_THROWS_WITH_AS(
      parse("alphabet: a\n\nautomaton M {\n  init q_unknown\n"
            "  state q_unknown\n}\n"),
      doctest::Contains("reserved"), Error);
  CHECK_THROWS_AS(parse("alphabet: a\n\nmas S {\n  init q0\n}\n"), Error);
}

TEST_CASE("comments and empty alphabets") {
  ParsedValue v = parse(
      "# leading comment\nalphabet:\n\nautomaton M { # inline\n"
      "  init q0\n  state q0 [marked]\n}\n");
  const Automaton& m = std::get<Automaton>(v);
  CHECK(m.alphabet.empty());
  CHECK(m.marked == std::set<StateId>{"q0"});
}

TEST_CASE("compound ids parse as opaque states") {
  ParsedValue v = parse(
      "alphabet: a\n\nmas S {\n  init (x,y)\n"
      "  state (x,y) acc { {a} }\n  state (z,w) [marked] acc { {} }\n"
      "  (x,y) -a-> (z,w)\n}\n");
  const Mas& s = std::get<Mas>(v);
  CHECK(s.states == std::set<StateId>{"(x,y)", "(z,w)"});
  CHECK(s.step("(x,y)", "a") == StateId("(z,w)"));
}

TEST_CASE("serializer output is deterministic and canonical") {
  Mas s1 = load_mas("s1.mas");
  Mas copy = s1;
  CHECK(serialize(s1) == serialize(copy));

  // Golden bytes for the pre-quotient of the running pair.
  Mas pq = pre_quotient(s1, load_mas("s2.mas"));
  CHECK(serialize(pq) == read_file(fixture_path("golden/prequotient_s1_s2.mas")));
}

TEST_CASE("dot export") {
  Mas pq = pre_quotient(load_mas("s1.mas"), load_mas("s2.mas"));
  std::string dot = to_dot(pq);
  CHECK(dot == read_file(fixture_path("golden/prequotient_s1_s2.dot")));
  CHECK(dot.find("doublecircle") != std::string::npos);
  CHECK(dot.find("{a,b}") != std::string::npos);

  Masp q = quotient(load_mas("s1.mas"), load_mas("s2.mas"));
  std::string masp_dot = to_dot(q);
  CHECK(masp_dot.find("priorities:") != std::string::npos);
}

TEST_CASE("the unfolding partner state serializes as q_unknown") {
  Mas u = unfold(load_mas("multi_partner_s2.mas"),
                 load_mas("multi_partner_s1.mas"));
  std::string text = serialize(u);
  CHECK(text.find("q_unknown") != std::string::npos);
  CHECK(text.find("q?") == std::string::npos);
}

TEST_CASE("cli verdicts agree with the library") {
  auto run = [](std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return std::pair<int, std::string>(code, out.str());
  };

  auto [sat_ok, sat_out] =
      run({"sat", fixture_path("m_prime.aut"), fixture_path("s1.mas")});
  CHECK(sat_ok == 0);
  CHECK(sat_out.find("witness: (0',0) (1',1)") != std::string::npos);

  auto [sat_bad, sat_bad_out] =
      run({"sat", fixture_path("m11.aut"), fixture_path("s2.mas")});
  CHECK(sat_bad == 1);

  auto [compat_code, compat_out] =
      run({"compat", fixture_path("s1.mas"), fixture_path("s2.mas")});
  CHECK(compat_code == 1);
  CHECK(compat_out.find("livelock cycle") != std::string::npos);

  auto [pq_code, pq_out] = run(
      {"prequotient", fixture_path("s1.mas"), fixture_path("s2.mas")});
  CHECK(pq_code == 0);
  CHECK(pq_out ==
        serialize(pre_quotient(load_mas("s1.mas"), load_mas("s2.mas"))));

  auto [parse_code, parse_out] = run({"validate", "/nonexistent.mas"});
  CHECK(parse_code == 2);

  auto [bisim_code, bisim_out] =
      run({"bisim", fixture_path("m_prime.aut"), fixture_path("m_second.aut")});
  CHECK(bisim_code == 1);

  auto [cap_code, cap_out] =
      run({"enumerate", "--alphabet", "a,b,c", "--max-states", "3",
           "--limit", "10"});
  CHECK(cap_code == 3);

  auto [check_code, check_out] = run({"check-theorems",
                                      fixture_path("modal_s1.mas"),
                                      fixture_path("modal_s2.mas"),
                                      "--theorem", "deadlock_iff"});
  CHECK(check_code == 0);
  CHECK(check_out.find("THEOREM deadlock_iff PASS") != std::string::npos);
}

TEST_CASE("every subcommand dispatches") {
  auto run = [](std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return std::pair<int, std::string>(code, out.str());
  };
  std::string s1 = fixture_path("s1.mas");
  std::string s2 = fixture_path("s2.mas");

  CHECK(run({"normalize", s1}).second ==
        serialize(normal_form(load_mas("s1.mas"))));
  CHECK(run({"product", fixture_path("m11.aut"), fixture_path("m_prime.aut")})
            .first == 0);
  CHECK(run({"quotient", s1, s2}).second ==
        serialize(quotient(load_mas("s1.mas"), load_mas("s2.mas"))));
  CHECK(run({"correct-dead", s1, s2}).second ==
        serialize(dead_correction(load_mas("s1.mas"), load_mas("s2.mas"))));
  auto [live_code, live_out] = run({"correct-live", s1, s2});
  CHECK(live_code == 0);
  CHECK(live_out.find("priority") != std::string::npos);
  auto [cyc_code, cyc_out] = run({"cycles", s1, "--implementable"});
  CHECK(cyc_code == 0);
  CHECK(cyc_out == "{0 -> {a}}\n");
  CHECK(run({"dot", s1}).second == to_dot(load_mas("s1.mas")));
  auto [enum_code, enum_out] =
      run({"enumerate", "--alphabet", "a", "--max-states", "1"});
  CHECK(enum_code == 0);
  CHECK(enum_out.find("aut{") != std::string::npos);
  CHECK(run({"bogus"}).first == 2);
  CHECK(run({"--help"}).first == 0);
}
