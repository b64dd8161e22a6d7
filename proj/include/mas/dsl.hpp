#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "mas/types.hpp"

namespace mas {

using ParsedValue = std::variant<Automaton, Mas, Masp>;

/// Parses one `automaton`, `mas` or `masp` block preceded by an alphabet
/// declaration. Diagnostics carry line/column positions; determinism,
/// alphabet closure and acceptance totality are enforced. The reserved
/// partner id (`q_unknown`) is rejected.
ParsedValue parse(std::string_view text);

/// Canonical text form: states sorted by id, acceptance entries by
/// (cardinality, lexicographic), transitions by (source, action).
/// Byte-identical for equal values.
std::string serialize(const Automaton& m);
std::string serialize(const Mas& s);
std::string serialize(const Masp& sp);
std::string serialize(const ParsedValue& v);

/// Graphviz export; marked states are double circles, acceptance sets are
/// printed in state labels, priorities in the graph label.
std::string to_dot(const Automaton& m);
std::string to_dot(const Mas& s);
std::string to_dot(const Masp& sp);
std::string to_dot(const ParsedValue& v);

/// One-line canonical forms for reports and witnesses.
std::string compact(const Automaton& m);
std::string compact(const Mas& s);
std::string compact(const Cycle& c);

}  // namespace mas
