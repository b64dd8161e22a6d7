#include "mas/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mas/compat.hpp"
#include "mas/dsl.hpp"
#include "mas/model.hpp"
#include "mas/normalize.hpp"
#include "mas/oracle.hpp"
#include "mas/prequotient.hpp"
#include "mas/quotient.hpp"
#include "mas/semantics.hpp"

namespace mas {

namespace {

ParsedValue load(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(Error::Kind::Usage, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse(buf.str());
  } catch (const Error& e) {
    if (e.kind() == Error::Kind::Parse)
      throw Error(Error::Kind::Parse, path + ": " + e.what());
    throw;
  }
}

const Automaton& expect_automaton(const ParsedValue& v,
                                  const std::string& path) {
  if (const Automaton* m = std::get_if<Automaton>(&v)) return *m;
  throw Error(Error::Kind::Usage, path + ": expected an automaton");
}

const Mas& expect_mas(const ParsedValue& v, const std::string& path) {
  if (const Mas* s = std::get_if<Mas>(&v)) return *s;
  throw Error(Error::Kind::Usage, path + ": expected a mas");
}

void emit(const std::string& text, const std::string& out_path,
          std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(out_path);
  if (!f)
    throw Error(Error::Kind::Usage, "cannot write '" + out_path + "'");
  f << text;
}

std::string witness_pairs(const SimWitness& w) {
  std::string out;
  for (const auto& [l, r] : w.pairs) {
    if (!out.empty()) out += " ";
    out += "(" + l + "," + r + ")";
  }
  return out;
}

std::set<Action> parse_alphabet_list(const std::string& csv) {
  std::set<Action> out;
  std::string cur;
  std::istringstream in(csv);
  while (std::getline(in, cur, ','))
    if (!cur.empty()) out.insert(cur);
  return out;
}

struct Options {
  std::string file_a, file_b, out_path;
  bool implementable = false;
  std::string alphabet = "a,b,c";
  int max_states = 3;
  int model_bound = 3;
  int spec_bound = 3;
  std::string spec_file;
  std::vector<std::string> theorems;
  int random_pairs = 0;
  unsigned long long seed = 1;
  std::size_t enum_limit = EnumLimits{}.max_candidates;
  std::size_t grid_limit = CheckBounds{}.max_grid;
  std::size_t cycle_cap = CycleLimits{}.max_cycles;
  std::vector<std::string> validate_files;
};

int run_theorem_reports(const std::vector<TheoremReport>& reports,
                        std::ostream& out) {
  bool hard = false;
  for (const TheoremReport& r : reports) {
    out << report_line(r) << "\n";
    if (!r.note.empty()) out << "# note: " << r.note << "\n";
    for (std::size_t i = 1; i < r.witnesses.size(); ++i)
      out << "# witness: " << r.witnesses[i] << "\n";
    if (r.violations > r.witnesses.size())
      out << "# " << (r.violations - r.witnesses.size())
          << " further violations not shown\n";
    if (r.verdict == Verdict::HardFail) hard = true;
  }
  return hard ? 1 : 0;
}

int dispatch(const std::string& cmd, const Options& opt, std::ostream& out) {
  CycleLimits cycle_limits;
  cycle_limits.max_cycles = opt.cycle_cap;
  EnumLimits enum_limits;
  enum_limits.max_candidates = opt.enum_limit;

  if (cmd == "validate") {
    for (const std::string& path : opt.validate_files) {
      ParsedValue v = load(path);
      std::string kind = std::holds_alternative<Automaton>(v) ? "automaton"
                         : std::holds_alternative<Mas>(v)     ? "mas"
                                                              : "masp";
      std::string name = std::visit(
          [](const auto& x) {
            if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Masp>)
              return x.base.name;
            else
              return x.name;
          },
          v);
      out << "OK " << kind << " " << name << "\n";
    }
    return 0;
  }
  if (cmd == "normalize") {
    Mas s = expect_mas(load(opt.file_a), opt.file_a);
    emit(serialize(normal_form(s)), opt.out_path, out);
    return 0;
  }
  if (cmd == "product") {
    Automaton a = expect_automaton(load(opt.file_a), opt.file_a);
    Automaton b = expect_automaton(load(opt.file_b), opt.file_b);
    emit(serialize(product(a, b)), opt.out_path, out);
    return 0;
  }
  if (cmd == "sat") {
    Automaton m = expect_automaton(load(opt.file_a), opt.file_a);
    ParsedValue spec = load(opt.file_b);
    SatResult res;
    if (const Masp* sp = std::get_if<Masp>(&spec))
      res = satisfies_masp(m, *sp);
    else
      res = satisfies(m, expect_mas(spec, opt.file_b));
    if (res.holds) {
      out << "SAT\nwitness: " << witness_pairs(res.witness) << "\n";
      return 0;
    }
    out << "UNSAT: " << res.witness.violation->clause << " at ("
        << res.witness.violation->left << "," << res.witness.violation->right
        << ")\n";
    return 1;
  }
  if (cmd == "bisim") {
    Automaton a = expect_automaton(load(opt.file_a), opt.file_a);
    Automaton b = expect_automaton(load(opt.file_b), opt.file_b);
    BisimResult res = bisimilar(a, b);
    if (res.bisimilar) {
      out << "BISIMILAR\nwitness: " << witness_pairs(res.witness) << "\n";
      return 0;
    }
    out << "NOT-BISIMILAR: " << res.witness.violation->clause << " at ("
        << res.witness.violation->left << "," << res.witness.violation->right
        << ")\n";
    return 1;
  }
  if (cmd == "prequotient") {
    Mas s1 = expect_mas(load(opt.file_a), opt.file_a);
    Mas s2 = expect_mas(load(opt.file_b), opt.file_b);
    emit(serialize(pre_quotient(s1, s2)), opt.out_path, out);
    return 0;
  }
  if (cmd == "quotient") {
    Mas s1 = expect_mas(load(opt.file_a), opt.file_a);
    Mas s2 = expect_mas(load(opt.file_b), opt.file_b);
    emit(serialize(quotient(s1, s2, cycle_limits)), opt.out_path, out);
    return 0;
  }
  if (cmd == "compat") {
    Mas s1 = expect_mas(load(opt.file_a), opt.file_a);
    Mas s2 = expect_mas(load(opt.file_b), opt.file_b);
    CompatResult res = compatible_reachability(s1, s2, cycle_limits);
    if (res.compatible) {
      out << "compatible\n";
      return 0;
    }
    if (res.deadlock_pair)
      out << "incompatible: deadlock pair (" << res.deadlock_pair->first
          << "," << res.deadlock_pair->second << ")\n";
    else
      out << "incompatible: livelock cycle " << compact(*res.livelock_cycle)
          << "\n";
    return 1;
  }
  if (cmd == "cycles") {
    Mas s = expect_mas(load(opt.file_a), opt.file_a);
    std::set<Cycle> cycles;
    if (opt.implementable) {
      cycles = implementable_cycles(s, cycle_limits);
    } else {
      for (const StateId& q : s.states) {
        std::set<Cycle> c = cycles_from(s, q, cycle_limits);
        cycles.insert(c.begin(), c.end());
      }
    }
    for (const Cycle& c : cycles) out << compact(c) << "\n";
    return 0;
  }
  if (cmd == "correct-dead") {
    Mas s1 = expect_mas(load(opt.file_a), opt.file_a);
    Mas s2 = expect_mas(load(opt.file_b), opt.file_b);
    emit(serialize(dead_correction(s1, s2)), opt.out_path, out);
    return 0;
  }
  if (cmd == "correct-live") {
    Mas s1 = normal_form(expect_mas(load(opt.file_a), opt.file_a));
    Mas s2 = normal_form(expect_mas(load(opt.file_b), opt.file_b));
    if (s1.bottom || s2.bottom) {
      emit(serialize(Masp{s1, {}}), opt.out_path, out);
      return 0;
    }
    auto [u1, u2] = unfoldings(s1, s2);
    emit(serialize(live_correction(u1, u2, cycle_limits)), opt.out_path, out);
    return 0;
  }
  if (cmd == "enumerate") {
    std::set<Action> alphabet = parse_alphabet_list(opt.alphabet);
    auto print = [&](const Automaton& m) {
      out << compact(m) << "\n";
      return true;
    };
    if (!opt.spec_file.empty()) {
      ParsedValue v = load(opt.spec_file);
      if (const Masp* sp = std::get_if<Masp>(&v))
        enumerate_models(*sp, opt.max_states, print, enum_limits);
      else
        enumerate_models(expect_mas(v, opt.spec_file), opt.max_states, print,
                         enum_limits);
    } else {
      enumerate_automata(alphabet, opt.max_states, print, enum_limits);
    }
    return 0;
  }
  if (cmd == "check-theorems") {
    std::vector<TheoremName> names;
    if (opt.theorems.empty()) {
      names = all_theorems();
    } else {
      for (const std::string& t : opt.theorems) {
        auto name = theorem_from_string(t);
        if (!name)
          throw Error(Error::Kind::Usage, "unknown theorem '" + t + "'");
        names.push_back(*name);
      }
    }
    CheckBounds bounds;
    bounds.model_states = opt.model_bound;
    bounds.max_grid = opt.grid_limit;
    bounds.enum_limits = enum_limits;
    bounds.cycle_limits = cycle_limits;
    if (opt.random_pairs > 0) {
      std::mt19937_64 rng(opt.seed);
      std::set<Action> pool = parse_alphabet_list(opt.alphabet);
      int exit_code = 0;
      for (int i = 0; i < opt.random_pairs; ++i) {
        std::vector<Action> acts(pool.begin(), pool.end());
        std::set<Action> alphabet;
        std::size_t size = 1 + rng() % acts.size();
        for (std::size_t j = 0; j < size; ++j) alphabet.insert(acts[j]);
        Mas s1 = random_mas_with_models(rng, alphabet, opt.spec_bound,
                                        opt.model_bound, 500, 2000);
        Mas s2 = random_mas_with_models(rng, alphabet, opt.spec_bound,
                                        opt.model_bound, 500, 2000);
        out << "PAIR " << i << " s1=" << compact(s1) << " s2=" << compact(s2)
            << std::endl;
        int rc = run_theorem_reports(check_theorems(names, s1, s2, bounds), out);
        if (rc != 0) exit_code = rc;
      }
      return exit_code;
    }
    Mas s1 = expect_mas(load(opt.file_a), opt.file_a);
    Mas s2 = expect_mas(load(opt.file_b), opt.file_b);
    return run_theorem_reports(check_theorems(names, s1, s2, bounds), out);
  }
  if (cmd == "dot") {
    emit(to_dot(load(opt.file_a)), opt.out_path, out);
    return 0;
  }
  throw Error(Error::Kind::Usage, "unknown command '" + cmd + "'");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Marked acceptance specifications: satisfaction, "
               "normalization, quotient and compatibility analysis"};
  app.require_subcommand(1);
  Options opt;

  auto add_output = [&](CLI::App* sub) {
    sub->add_option("-o,--output", opt.out_path, "write output to a file");
  };

  CLI::App* validate =
      app.add_subcommand("validate", "parse and check invariants");
  validate->add_option("files", opt.validate_files, "input files")
      ->required();

  CLI::App* normalize = app.add_subcommand("normalize", "normal form");
  normalize->add_option("spec", opt.file_a, "mas file")->required();
  add_output(normalize);

  CLI::App* prod = app.add_subcommand("product", "synchronous product");
  prod->add_option("left", opt.file_a, "automaton file")->required();
  prod->add_option("right", opt.file_b, "automaton file")->required();
  add_output(prod);

  CLI::App* sat = app.add_subcommand("sat", "satisfaction check");
  sat->add_option("model", opt.file_a, "automaton file")->required();
  sat->add_option("spec", opt.file_b, "mas or masp file")->required();

  CLI::App* bisim = app.add_subcommand("bisim", "bisimilarity check");
  bisim->add_option("left", opt.file_a, "automaton file")->required();
  bisim->add_option("right", opt.file_b, "automaton file")->required();

  CLI::App* prequo = app.add_subcommand("prequotient", "pre-quotient");
  prequo->add_option("s1", opt.file_a, "mas file")->required();
  prequo->add_option("s2", opt.file_b, "mas file")->required();
  add_output(prequo);

  CLI::App* quot = app.add_subcommand("quotient", "quotient (masp output)");
  quot->add_option("s1", opt.file_a, "mas file")->required();
  quot->add_option("s2", opt.file_b, "mas file")->required();
  quot->add_option("--cycle-cap", opt.cycle_cap, "cycle enumeration cap");
  add_output(quot);

  CLI::App* compat_cmd =
      app.add_subcommand("compat", "compatible-reachability check");
  compat_cmd->add_option("s1", opt.file_a, "mas file")->required();
  compat_cmd->add_option("s2", opt.file_b, "mas file")->required();
  compat_cmd->add_option("--cycle-cap", opt.cycle_cap,
                         "cycle enumeration cap");

  CLI::App* cycles = app.add_subcommand("cycles", "cycle enumeration");
  cycles->add_option("spec", opt.file_a, "mas file")->required();
  cycles->add_flag("--implementable", opt.implementable,
                   "only implementable cycles");
  cycles->add_option("--cycle-cap", opt.cycle_cap, "cycle enumeration cap");

  CLI::App* cdead = app.add_subcommand("correct-dead", "deadlock correction");
  cdead->add_option("s1", opt.file_a, "mas file")->required();
  cdead->add_option("s2", opt.file_b, "mas file")->required();
  add_output(cdead);

  CLI::App* clive = app.add_subcommand(
      "correct-live", "livelock correction on the unfoldings (masp output)");
  clive->add_option("s1", opt.file_a, "mas file")->required();
  clive->add_option("s2", opt.file_b, "mas file")->required();
  clive->add_option("--cycle-cap", opt.cycle_cap, "cycle enumeration cap");
  add_output(clive);

  CLI::App* enumerate =
      app.add_subcommand("enumerate", "bounded automaton/model enumeration");
  enumerate->add_option("--alphabet", opt.alphabet,
                        "comma-separated actions (default a,b,c)");
  enumerate->add_option("--max-states", opt.max_states, "state bound");
  enumerate->add_option("--spec", opt.spec_file,
                        "restrict to models of this mas/masp");
  enumerate->add_option("--limit", opt.enum_limit, "candidate cap");

  CLI::App* check =
      app.add_subcommand("check-theorems", "bounded theorem instantiation");
  check->add_option("s1", opt.file_a, "mas file");
  check->add_option("s2", opt.file_b, "mas file");
  check->add_option("--theorem", opt.theorems, "theorem name (repeatable)");
  check->add_option("--model-bound", opt.model_bound, "model state bound");
  check->add_option("--spec-bound", opt.spec_bound,
                    "random spec state bound");
  check->add_option("--random", opt.random_pairs,
                    "check this many random spec pairs instead of files");
  check->add_option("--seed", opt.seed, "random seed");
  check->add_option("--alphabet", opt.alphabet,
                    "action pool for random pairs");
  check->add_option("--limit", opt.enum_limit, "candidate cap");
  check->add_option("--grid-limit", opt.grid_limit, "model-pair grid cap");
  check->add_option("--cycle-cap", opt.cycle_cap, "cycle enumeration cap");

  CLI::App* dot = app.add_subcommand("dot", "Graphviz export");
  dot->add_option("file", opt.file_a, "input file")->required();
  add_output(dot);

  std::vector<const char*> argv;
  argv.push_back("mas");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  if (sub == check && opt.random_pairs == 0 &&
      (opt.file_a.empty() || opt.file_b.empty())) {
    err << "error: check-theorems needs two spec files or --random N\n";
    return 2;
  }

  try {
    return dispatch(sub->get_name(), opt, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case Error::Kind::CapExceeded:
        return 3;
      default:
        return 2;
    }
  }
}

}  // namespace mas
