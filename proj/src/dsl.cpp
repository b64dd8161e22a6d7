#include "mas/dsl.hpp"

#include <cctype>
#include <sstream>
#include <vector>

#include "mas/model.hpp"

namespace mas {

namespace {

enum class Tok {
  Ident,
  LBrace,
  RBrace,
  LParen,
  RParen,
  Comma,
  Pipe,
  Colon,
  Minus,
  Arrow,
  LBracket,
  RBracket,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token current_;

  [[noreturn]] void fail(const std::string& msg) {
    throw Error(Error::Kind::Parse, "parse error at " + std::to_string(line_) +
                                        ":" + std::to_string(col_) + ": " +
                                        msg);
  }

  char cur() const { return text_[pos_]; }
  bool done() const { return pos_ >= text_.size(); }

  void bump() {
    if (cur() == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_blank() {
    while (!done()) {
      if (std::isspace(static_cast<unsigned char>(cur()))) {
        bump();
      } else if (cur() == '#') {
        while (!done() && cur() != '\n') bump();
      } else {
        break;
      }
    }
  }

  void advance() {
    skip_blank();
    int line = line_;
    int col = col_;
    if (done()) {
      current_ = {Tok::End, "", line, col};
      return;
    }
    char c = cur();
    switch (c) {
      case '{': bump(); current_ = {Tok::LBrace, "{", line, col}; return;
      case '}': bump(); current_ = {Tok::RBrace, "}", line, col}; return;
      case '(': bump(); current_ = {Tok::LParen, "(", line, col}; return;
      case ')': bump(); current_ = {Tok::RParen, ")", line, col}; return;
      case ',': bump(); current_ = {Tok::Comma, ",", line, col}; return;
      case '|': bump(); current_ = {Tok::Pipe, "|", line, col}; return;
      case ':': bump(); current_ = {Tok::Colon, ":", line, col}; return;
      case '[': bump(); current_ = {Tok::LBracket, "[", line, col}; return;
      case ']': bump(); current_ = {Tok::RBracket, "]", line, col}; return;
      case '-':
        bump();
        if (!done() && cur() == '>') {
          bump();
          current_ = {Tok::Arrow, "->", line, col};
        } else {
          current_ = {Tok::Minus, "-", line, col};
        }
        return;
      default:
        break;
    }
    if (ident_char(c)) {
      std::string text;
      while (!done() && ident_char(cur())) {
        text.push_back(cur());
        bump();
      }
      current_ = {Tok::Ident, text, line, col};
      return;
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

struct RawState {
  bool marked = false;
  bool has_acc = false;
  AcceptanceSet acc;
  int line = 0;
  int col = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) {}

  ParsedValue run() {
    expect_keyword("alphabet");
    expect(Tok::Colon);
    while (lex_.peek().kind == Tok::Ident && !is_block_keyword(lex_.peek())) {
      alphabet_.insert(take_ident("action"));
      if (lex_.peek().kind == Tok::Comma)
        lex_.take();
      else
        break;
    }
    Token kind = lex_.take();
    if (kind.kind != Tok::Ident ||
        (kind.text != "automaton" && kind.text != "mas" &&
         kind.text != "masp"))
      fail(kind, "expected 'automaton', 'mas' or 'masp'");
    kind_ = kind.text;
    name_ = take_ident("block name");
    expect(Tok::LBrace);
    parse_body();
    expect(Tok::RBrace);
    if (lex_.peek().kind != Tok::End)
      fail(lex_.peek(), "trailing input after block");
    return build();
  }

 private:
  Lexer lex_;
  std::set<Action> alphabet_;
  std::string kind_;
  std::string name_;
  bool bottom_ = false;
  std::map<StateId, RawState> states_;
  std::optional<StateId> initial_;
  int initial_line_ = 0, initial_col_ = 0;
  struct RawTrans {
    StateId src;
    Action action;
    StateId dst;
    int line, col;
  };
  std::vector<RawTrans> transitions_;
  std::vector<std::pair<PrioritySet, Token>> priorities_;

  [[noreturn]] void fail(const Token& t, const std::string& msg) {
    throw Error(Error::Kind::Parse, "parse error at " + std::to_string(t.line) +
                                        ":" + std::to_string(t.col) + ": " +
                                        msg);
  }

  Token expect(Tok k) {
    Token t = lex_.take();
    if (t.kind != k) fail(t, "unexpected token '" + t.text + "'");
    return t;
  }

  void expect_keyword(const std::string& kw) {
    Token t = lex_.take();
    if (t.kind != Tok::Ident || t.text != kw)
      fail(t, "expected '" + kw + "'");
  }

  static bool is_block_keyword(const Token& t) {
    return t.kind == Tok::Ident &&
           (t.text == "automaton" || t.text == "mas" || t.text == "masp");
  }

  std::string take_ident(const std::string& what) {
    Token t = lex_.take();
    if (t.kind != Tok::Ident) fail(t, "expected " + what);
    return t.text;
  }

  // Simple or compound "(left,right)" state id; components are checked
  // against the reserved partner id.
  StateId parse_cid() {
    Token t = lex_.peek();
    if (t.kind == Tok::LParen) {
      lex_.take();
      StateId left = parse_cid();
      expect(Tok::Comma);
      StateId right = parse_cid();
      expect(Tok::RParen);
      return pair_id(left, right);
    }
    Token id = lex_.take();
    if (id.kind != Tok::Ident) fail(id, "expected state id");
    if (id.text == "q_unknown")
      fail(id, "the id 'q_unknown' is reserved for unfolding output");
    return id.text;
  }

  Action parse_action(const Token& at) {
    Token t = lex_.take();
    if (t.kind != Tok::Ident) fail(t, "expected action");
    if (alphabet_.count(t.text) == 0)
      fail(t, "unknown action '" + t.text + "'");
    (void)at;
    return t.text;
  }

  ActionSet parse_action_set() {
    expect(Tok::LBrace);
    ActionSet out;
    while (lex_.peek().kind == Tok::Ident) {
      Token t = lex_.take();
      if (alphabet_.count(t.text) == 0)
        fail(t, "unknown action '" + t.text + "'");
      out.insert(t.text);
      if (lex_.peek().kind == Tok::Comma)
        lex_.take();
      else
        break;
    }
    expect(Tok::RBrace);
    return out;
  }

  void parse_body() {
    while (true) {
      Token t = lex_.peek();
      if (t.kind == Tok::RBrace) return;
      if (t.kind == Tok::Ident && t.text == "bottom") {
        lex_.take();
        if (kind_ == "automaton")
          fail(t, "'bottom' is only meaningful for specifications");
        bottom_ = true;
        continue;
      }
      if (t.kind == Tok::Ident && t.text == "init") {
        lex_.take();
        if (initial_) fail(t, "duplicate 'init'");
        initial_ = parse_cid();
        initial_line_ = t.line;
        initial_col_ = t.col;
        continue;
      }
      if (t.kind == Tok::Ident && t.text == "state") {
        lex_.take();
        StateId id = parse_cid();
        if (states_.count(id)) fail(t, "duplicate state '" + id + "'");
        RawState st;
        st.line = t.line;
        st.col = t.col;
        if (lex_.peek().kind == Tok::LBracket) {
          lex_.take();
          expect_keyword("marked");
          expect(Tok::RBracket);
          st.marked = true;
        }
        if (lex_.peek().kind == Tok::Ident && lex_.peek().text == "acc") {
          Token acc_tok = lex_.take();
          if (kind_ == "automaton")
            fail(acc_tok, "acceptance sets are not allowed in an automaton");
          st.has_acc = true;
          expect(Tok::LBrace);
          while (lex_.peek().kind == Tok::LBrace) {
            st.acc.insert(parse_action_set());
            if (lex_.peek().kind == Tok::Comma)
              lex_.take();
            else
              break;
          }
          expect(Tok::RBrace);
        }
        states_.emplace(id, std::move(st));
        continue;
      }
      if (t.kind == Tok::Ident && t.text == "priority") {
        Token ptok = lex_.take();
        if (kind_ != "masp")
          fail(ptok, "priorities are only allowed in a masp block");
        expect(Tok::LBrace);
        PrioritySet p;
        while (true) {
          expect(Tok::LParen);
          StateId q = parse_cid();
          expect(Tok::Comma);
          Action a = parse_action(ptok);
          expect(Tok::RParen);
          p.pairs.insert({q, a});
          if (lex_.peek().kind == Tok::Pipe)
            lex_.take();
          else
            break;
        }
        expect(Tok::RBrace);
        priorities_.push_back({std::move(p), ptok});
        continue;
      }
      // Otherwise a transition: cid -action-> cid
      if (t.kind == Tok::Ident || t.kind == Tok::LParen) {
        StateId src = parse_cid();
        expect(Tok::Minus);
        Action a = parse_action(t);
        expect(Tok::Arrow);
        StateId dst = parse_cid();
        transitions_.push_back({src, a, dst, t.line, t.col});
        continue;
      }
      fail(t, "unexpected token '" + t.text + "'");
    }
  }

  [[noreturn]] void fail_at(int line, int col, const std::string& msg) {
    throw Error(Error::Kind::Parse, "parse error at " + std::to_string(line) +
                                        ":" + std::to_string(col) + ": " +
                                        msg);
  }

  ParsedValue build() {
    if (bottom_) {
      if (!states_.empty() || initial_ || !transitions_.empty() ||
          !priorities_.empty())
        throw Error(Error::Kind::Parse,
                    "a bottom specification block must be empty");
      Mas b;
      b.name = name_;
      b.alphabet = alphabet_;
      b.bottom = true;
      if (kind_ == "masp") return Masp{std::move(b), {}};
      return b;
    }
    if (!initial_)
      throw Error(Error::Kind::Parse, "missing 'init' declaration");
    if (!states_.count(*initial_))
      fail_at(initial_line_, initial_col_,
              "initial state '" + *initial_ + "' is not declared");

    std::map<StateId, std::map<Action, StateId>> delta;
    for (const RawTrans& tr : transitions_) {
      if (!states_.count(tr.src))
        fail_at(tr.line, tr.col, "unknown state '" + tr.src + "'");
      if (!states_.count(tr.dst))
        fail_at(tr.line, tr.col, "unknown state '" + tr.dst + "'");
      auto [it, inserted] = delta[tr.src].emplace(tr.action, tr.dst);
      if (!inserted)
        fail_at(tr.line, tr.col,
                "duplicate transition from '" + tr.src + "' on '" +
                    tr.action + "' (nondeterminism)");
    }

    if (kind_ == "automaton") {
      Automaton m;
      m.name = name_;
      m.alphabet = alphabet_;
      m.initial = *initial_;
      m.transitions = std::move(delta);
      for (const auto& [id, st] : states_) {
        m.states.insert(id);
        if (st.marked) m.marked.insert(id);
      }
      validate(m);
      return m;
    }

    Mas s;
    s.name = name_;
    s.alphabet = alphabet_;
    s.initial = *initial_;
    s.transitions = std::move(delta);
    for (const auto& [id, st] : states_) {
      s.states.insert(id);
      if (st.marked) s.marked.insert(id);
      if (!st.has_acc)
        fail_at(st.line, st.col,
                "state '" + id + "' has no acceptance set");
      s.acc[id] = st.acc;
    }
    validate(s);
    if (kind_ == "mas") return s;

    Masp sp{std::move(s), {}};
    for (const auto& [p, tok] : priorities_) {
      for (const auto& [q, a] : p.pairs)
        if (!sp.base.has_state(q))
          fail_at(tok.line, tok.col,
                  "priority references unknown state '" + q + "'");
      sp.priorities.insert(p);
    }
    validate(sp);
    return sp;
  }
};

std::string render_id(const StateId& id) {
  std::string out = id;
  std::size_t pos = 0;
  while ((pos = out.find("q?", pos)) != std::string::npos) {
    out.replace(pos, 2, "q_unknown");
    pos += 9;
  }
  return out;
}

std::string render_action_set(const ActionSet& x) {
  std::string out = "{";
  bool first = true;
  for (const Action& a : x) {
    if (!first) out += ",";
    first = false;
    out += a;
  }
  out += "}";
  return out;
}

std::string render_acc(const AcceptanceSet& as) {
  std::string out = "acc { ";
  bool first = true;
  for (const ActionSet& x : as) {
    if (!first) out += ", ";
    first = false;
    out += render_action_set(x);
  }
  if (as.empty()) out += "}";
  else out += " }";
  return out;
}

std::string header(const std::set<Action>& alphabet) {
  std::string out = "alphabet:";
  bool first = true;
  for (const Action& a : alphabet) {
    out += first ? " " : ", ";
    first = false;
    out += a;
  }
  out += "\n\n";
  return out;
}

template <typename T>
void render_transitions(std::ostringstream& os, const T& x) {
  for (const auto& [src, row] : x.transitions)
    for (const auto& [a, dst] : row)
      os << "  " << render_id(src) << " -" << a << "-> " << render_id(dst)
         << "\n";
}

void render_mas_body(std::ostringstream& os, const Mas& s) {
  os << "  init " << render_id(s.initial) << "\n";
  for (const StateId& q : s.states) {
    os << "  state " << render_id(q);
    if (s.is_marked(q)) os << " [marked]";
    os << " " << render_acc(s.acc_at(q)) << "\n";
  }
  render_transitions(os, s);
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string render_priority(const PrioritySet& p) {
  std::string out = "{ ";
  bool first = true;
  for (const auto& [q, a] : p) {
    if (!first) out += " | ";
    first = false;
    out += "(" + render_id(q) + "," + a + ")";
  }
  out += " }";
  return out;
}

}  // namespace

ParsedValue parse(std::string_view text) { return Parser(text).run(); }

std::string serialize(const Automaton& m) {
  std::ostringstream os;
  os << header(m.alphabet);
  os << "automaton " << m.name << " {\n";
  os << "  init " << render_id(m.initial) << "\n";
  for (const StateId& r : m.states) {
    os << "  state " << render_id(r);
    if (m.is_marked(r)) os << " [marked]";
    os << "\n";
  }
  render_transitions(os, m);
  os << "}\n";
  return os.str();
}

std::string serialize(const Mas& s) {
  std::ostringstream os;
  os << header(s.alphabet);
  os << "mas " << s.name << " {\n";
  if (s.bottom) {
    os << "  bottom\n}\n";
    return os.str();
  }
  render_mas_body(os, s);
  os << "}\n";
  return os.str();
}

std::string serialize(const Masp& sp) {
  std::ostringstream os;
  os << header(sp.base.alphabet);
  os << "masp " << sp.base.name << " {\n";
  if (sp.base.bottom) {
    os << "  bottom\n}\n";
    return os.str();
  }
  render_mas_body(os, sp.base);
  for (const PrioritySet& p : sp.priorities)
    os << "  priority " << render_priority(p) << "\n";
  os << "}\n";
  return os.str();
}

std::string serialize(const ParsedValue& v) {
  return std::visit([](const auto& x) { return serialize(x); }, v);
}

std::string to_dot(const Automaton& m) {
  std::ostringstream os;
  os << "digraph \"" << dot_escape(m.name) << "\" {\n  rankdir=LR;\n";
  os << "  __init [shape=point, label=\"\"];\n";
  for (const StateId& r : m.states) {
    std::string id = dot_escape(render_id(r));
    os << "  \"" << id << "\" [shape="
       << (m.is_marked(r) ? "doublecircle" : "circle") << ", label=\"" << id
       << "\"];\n";
  }
  os << "  __init -> \"" << dot_escape(render_id(m.initial)) << "\";\n";
  for (const auto& [src, row] : m.transitions)
    for (const auto& [a, dst] : row)
      os << "  \"" << dot_escape(render_id(src)) << "\" -> \""
         << dot_escape(render_id(dst)) << "\" [label=\"" << a << "\"];\n";
  os << "}\n";
  return os.str();
}

std::string to_dot(const Mas& s) {
  std::ostringstream os;
  os << "digraph \"" << dot_escape(s.name) << "\" {\n  rankdir=LR;\n";
  if (s.bottom) {
    os << "  bottom [shape=box, label=\"bottom\"];\n}\n";
    return os.str();
  }
  os << "  __init [shape=point, label=\"\"];\n";
  for (const StateId& q : s.states) {
    std::string id = dot_escape(render_id(q));
    std::string acc = "{";
    bool first = true;
    for (const ActionSet& x : s.acc_at(q)) {
      if (!first) acc += ",";
      first = false;
      acc += render_action_set(x);
    }
    acc += "}";
    os << "  \"" << id << "\" [shape="
       << (s.is_marked(q) ? "doublecircle" : "circle") << ", label=\"" << id
       << "\\n" << dot_escape(acc) << "\"];\n";
  }
  os << "  __init -> \"" << dot_escape(render_id(s.initial)) << "\";\n";
  for (const auto& [src, row] : s.transitions)
    for (const auto& [a, dst] : row)
      os << "  \"" << dot_escape(render_id(src)) << "\" -> \""
         << dot_escape(render_id(dst)) << "\" [label=\"" << a << "\"];\n";
  os << "}\n";
  return os.str();
}

std::string to_dot(const Masp& sp) {
  std::string out = to_dot(sp.base);
  if (sp.priorities.empty()) return out;
  std::string label = "priorities:";
  for (const PrioritySet& p : sp.priorities)
    label += " " + render_priority(p);
  out.insert(out.rfind("}\n"),
             "  label=\"" + dot_escape(label) + "\";\n  labelloc=top;\n");
  return out;
}

std::string to_dot(const ParsedValue& v) {
  return std::visit([](const auto& x) { return to_dot(x); }, v);
}

std::string compact(const Automaton& m) {
  std::string out = "aut{init=" + render_id(m.initial) + ";marked={";
  bool first = true;
  for (const StateId& r : m.marked) {
    if (!first) out += ",";
    first = false;
    out += render_id(r);
  }
  out += "};trans={";
  first = true;
  for (const auto& [src, row] : m.transitions)
    for (const auto& [a, dst] : row) {
      if (!first) out += ",";
      first = false;
      out += render_id(src) + "-" + a + "->" + render_id(dst);
    }
  out += "}}";
  return out;
}

std::string compact(const Mas& s) {
  if (s.bottom) return "mas{bottom}";
  std::string out = "mas{init=" + render_id(s.initial) + ";states={";
  bool first = true;
  for (const StateId& q : s.states) {
    if (!first) out += ",";
    first = false;
    out += render_id(q);
    if (s.is_marked(q)) out += "!";
    out += ":";
    bool f2 = true;
    for (const ActionSet& x : s.acc_at(q)) {
      if (!f2) out += "|";
      f2 = false;
      out += render_action_set(x);
    }
  }
  out += "};trans={";
  first = true;
  for (const auto& [src, row] : s.transitions)
    for (const auto& [a, dst] : row) {
      if (!first) out += ",";
      first = false;
      out += render_id(src) + "-" + a + "->" + render_id(dst);
    }
  out += "}}";
  return out;
}

std::string compact(const Cycle& c) {
  std::string out = "{";
  bool first = true;
  for (const auto& [q, acts] : c.entries) {
    if (!first) out += ", ";
    first = false;
    out += render_id(q) + " -> " + render_action_set(acts);
  }
  out += "}";
  return out;
}

}  // namespace mas
