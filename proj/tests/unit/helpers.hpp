#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mas/dsl.hpp"
#include "mas/model.hpp"

namespace mastest {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string fixture_path(const std::string& name) {
  return std::string(MAS_FIXTURE_DIR) + "/" + name;
}

inline mas::ParsedValue load(const std::string& name) {
  return mas::parse(read_file(fixture_path(name)));
}

inline mas::Mas load_mas(const std::string& name) {
  return std::get<mas::Mas>(load(name));
}

inline mas::Automaton load_aut(const std::string& name) {
  return std::get<mas::Automaton>(load(name));
}

// Independent satisfaction oracle: searches over every relation on the
// state products instead of following the forced synchronized relation.
// Only usable for small inputs (|R| * |Q| <= 20).
inline bool sat_bruteforce(const mas::Automaton& m, const mas::Mas& s) {
  if (s.bottom) return false;
  if (!mas::is_terminating(m).terminating) return false;
  std::vector<std::pair<mas::StateId, mas::StateId>> pairs;
  for (const mas::StateId& r : m.states)
    for (const mas::StateId& q : s.states) pairs.push_back({r, q});
  REQUIRE(pairs.size() <= 20);
  auto index_of = [&](const mas::StateId& r, const mas::StateId& q) {
    for (std::size_t i = 0; i < pairs.size(); ++i)
      if (pairs[i].first == r && pairs[i].second == q) return i;
    return pairs.size();
  };
  std::size_t initial = index_of(m.initial, s.initial);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size());
       ++mask) {
    if (!(mask & (std::uint64_t{1} << initial))) continue;
    bool ok = true;
    for (std::size_t i = 0; i < pairs.size() && ok; ++i) {
      if (!(mask & (std::uint64_t{1} << i))) continue;
      const auto& [r, q] = pairs[i];
      mas::ActionSet fireable = mas::ready(m, r);
      if (!s.acc_at(q).contains(fireable)) {
        ok = false;
        break;
      }
      if (m.is_marked(r) && !s.is_marked(q)) {
        ok = false;
        break;
      }
      for (const mas::Action& a : fireable) {
        auto qn = s.step(q, a);
        if (!qn) {
          ok = false;
          break;
        }
        std::size_t next = index_of(*m.step(r, a), *qn);
        if (!(mask & (std::uint64_t{1} << next))) {
          ok = false;
          break;
        }
      }
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace mastest
