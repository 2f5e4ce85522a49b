// Command-line front door. Every subcommand is a thin wrapper over the
// library; reports are deterministic for fixed inputs and flags.
//
// Exit codes: 0 affirmative verdict, 1 negative verdict (NotDerivable,
// NotFound, Fails, a proof that does not check, ...), 2 usage or parse
// error, 3 internal failure.
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bes/generate.hpp"
#include "bes/parser.hpp"

using namespace bes;

namespace {

// Raised for bad invocations discovered after flag parsing (missing files,
// contradictory flags). Mapped to exit code 2 like CLI11's own errors.
struct UsageError : Error {
  using Error::Error;
};

struct Opts {
  std::string base_file, goal, hyps, system, universe_file, policy;
  std::string file;  // positional input
  std::string demo;  // demo name
  std::string format = "text";
  int depth = -1;
  long seed = 0;  // reserved for generator-backed workflows
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_keyword(const std::string& text) {
  detail::Lexer lx(text);
  return lx.cur.kind == detail::Tok::Ident ? lx.cur.text : "";
}

GroundAtom parse_atom_str(const std::string& s, Signature& sig) {
  detail::Lexer lx(s);
  GroundAtom a = detail::parse_atom_tokens(lx, sig, {});
  if (lx.cur.kind != detail::Tok::End)
    lx.fail("trailing input after the atom", lx.cur.begin, lx.cur.end);
  return a;
}

std::set<GroundAtom> parse_atom_set(const std::string& s, Signature& sig) {
  std::set<GroundAtom> out;
  if (s.empty()) return out;
  detail::Lexer lx(s);
  out.insert(detail::parse_atom_tokens(lx, sig, {}));
  while (lx.accept(detail::Tok::Comma))
    out.insert(detail::parse_atom_tokens(lx, sig, {}));
  if (lx.cur.kind != detail::Tok::End)
    lx.fail("trailing input after the atom list", lx.cur.begin, lx.cur.end);
  return out;
}

// Key/value lines in text or tsv form; multi-line blocks only in text form.
struct Report {
  bool tsv = false;
  void kv(const std::string& k, const std::string& v) const {
    std::cout << k << (tsv ? "\t" : ": ") << v << "\n";
  }
  void block(const std::string& k, const std::string& body) const {
    if (tsv) return;
    std::cout << k << ":\n" << body;
    if (body.empty() || body.back() != '\n') std::cout << "\n";
  }
};

std::string join_atoms(const std::set<GroundAtom>& atoms) {
  std::string s;
  for (auto& a : atoms) {
    if (!s.empty()) s += ", ";
    s += print_atom(a);
  }
  return s.empty() ? "(none)" : s;
}

// --- subcommands -------------------------------------------------------------

int cmd_parse(const Opts& o, const Report& rep) {
  Signature sig;
  int given = !o.goal.empty() + !o.base_file.empty() +
              !o.universe_file.empty() + !o.file.empty();
  if (given != 1)
    throw UsageError("parse needs exactly one of --goal, --base, --universe "
                     "or a file");
  if (!o.goal.empty()) {
    rep.kv("formula", print_formula(parse_formula(o.goal, sig)));
    return 0;
  }
  if (!o.base_file.empty()) {
    std::cout << print_base(parse_base(slurp(o.base_file), sig));
    return 0;
  }
  if (!o.universe_file.empty()) {
    std::cout << print_universe(parse_universe(slurp(o.universe_file), sig));
    return 0;
  }
  std::string text = slurp(o.file);
  std::string kw = first_keyword(text);
  if (kw == "hilbert")
    std::cout << print_hilbert(parse_hilbert(text, sig));
  else if (kw == "nd")
    std::cout << print_nd(parse_nd(text, sig));
  else if (kw == "base")
    std::cout << print_base(parse_base(text, sig));
  else if (kw == "universe")
    std::cout << print_universe(parse_universe(text, sig));
  else if (kw == "sim")
    std::cout << print_simbase(parse_simbase(text));
  else
    throw UsageError("unrecognized input (expected hilbert, nd, base, "
                     "universe or sim)");
  return 0;
}

int cmd_derive(const Opts& o, const Report& rep) {
  if (o.base_file.empty() || o.goal.empty())
    throw UsageError("derive needs --base and --goal");
  Signature sig;
  Base b = parse_base(slurp(o.base_file), sig);
  GroundAtom goal = parse_atom_str(o.goal, sig);
  std::set<GroundAtom> hyps = parse_atom_set(o.hyps, sig);
  DeriveMode mode = o.depth >= 0 ? DeriveMode::TopDown : DeriveMode::Saturate;
  Verdict v = derive(b, hyps, goal, mode, o.depth);
  rep.kv("base", b.name);
  rep.kv("query", join_atoms(hyps) + " |- " + print_atom(goal));
  switch (v.kind) {
    case Verdict::Derivable: {
      rep.kv("verdict", "Derivable");
      rep.block("trace", print_trace(v.trace));
      std::string why;
      if (!check_trace(b, v.trace, &why)) throw Error("bad trace: " + why);
      rep.kv("trace check", "ok");
      return 0;
    }
    case Verdict::NotDerivable:
      rep.kv("verdict", "NotDerivable");
      return 1;
    default:
      rep.kv("verdict", "Unknown (bounded evidence: depth " +
                            std::to_string(o.depth) + " exhausted)");
      return 1;
  }
}

int cmd_check(const Opts& o, const Report& rep) {
  if (o.file.empty()) throw UsageError("check needs a proof script file");
  std::string text = slurp(o.file);
  std::string kw = first_keyword(text);
  Signature sig;
  if (kw == "hilbert") {
    HilbertProof p = parse_hilbert(text, sig);
    SystemId sys = p.system;
    if (o.system == "HI") sys = SystemId::HI;
    else if (o.system == "HC") sys = SystemId::HC;
    else if (!o.system.empty())
      throw UsageError("--system " + o.system + " does not apply to a "
                       "Hilbert script");
    rep.kv("system", system_name(sys));
    rep.kv("conclusion", print_formula(p.conclusion()));
    HilbertReport r = check_hilbert(sys, p);
    if (r.ok()) {
      rep.kv("check", "ok");
      return 0;
    }
    rep.kv("check", "failed");
    for (auto& it : r.items)
      rep.kv("step " + std::to_string(it.step + 1), it.msg);
    return 1;
  }
  if (kw == "nd") {
    NDProof p = parse_nd(text, sig);
    if (o.system == "NI") p.system = NDSystem::NI;
    else if (o.system == "NC") p.system = NDSystem::NC;
    else if (!o.system.empty())
      throw UsageError("--system " + o.system + " does not apply to a "
                       "natural deduction script");
    rep.kv("system", nd_system_name(p.system));
    rep.kv("conclusion", print_formula(p.root->concl));
    NDReport r = check_nd(p);
    if (r.ok()) {
      rep.kv("check", "ok");
      return 0;
    }
    rep.kv("check", "failed");
    for (auto& it : r.items)
      rep.kv(it.path.empty() ? "root" : it.path, it.msg);
    return 1;
  }
  throw UsageError("unrecognized script (expected hilbert or nd)");
}

int cmd_prove(const Opts& o, const Report& rep) {
  if (o.goal.empty()) throw UsageError("prove needs --goal");
  SystemId sys;
  if (o.system.empty() || o.system == "HI") sys = SystemId::HI;
  else if (o.system == "HC") sys = SystemId::HC;
  else throw UsageError("prove searches Hilbert systems: --system HI|HC");
  Signature sig;
  FormulaRef goal = parse_formula(o.goal, sig);
  std::vector<FormulaRef> hyps = parse_formula_list(o.hyps, sig);
  int depth = o.depth >= 0 ? o.depth : 6;
  SearchResult res = search(sys, hyps, goal, depth);
  rep.kv("system", system_name(sys));
  rep.kv("goal", print_formula(goal));
  if (!res.proof) {
    rep.kv("verdict",
           std::string("NotFound (bounded evidence: ") +
               (res.budget_hit ? "node budget exhausted"
                               : "depth " + std::to_string(depth) +
                                     " exhausted") +
               ", nodes " + std::to_string(res.nodes) + ")");
    return 1;
  }
  rep.kv("verdict", "Found at depth " + std::to_string(res.depth_found) +
                        " (nodes " + std::to_string(res.nodes) + ")");
  rep.block("script", print_hilbert(*res.proof));
  if (!check_hilbert(sys, *res.proof).ok())
    throw Error("search returned a proof that does not check");
  rep.kv("check", "ok");
  return 0;
}

int cmd_translate(const Opts& o, const Report& rep) {
  if (o.file.empty()) throw UsageError("translate needs a proof script file");
  std::string text = slurp(o.file);
  std::string kw = first_keyword(text);
  Signature sig;
  if (kw == "hilbert") {
    HilbertProof p = parse_hilbert(text, sig);
    std::string natural = p.system == SystemId::HI ? "NI" : "NC";
    if (!o.system.empty() && o.system != natural)
      throw UsageError("a " + system_name(p.system) +
                       " script translates to " + natural);
    if (!check_hilbert(p.system, p).ok()) {
      rep.kv("check", "input script fails its checker");
      return 1;
    }
    NDProof nd = hilbert_to_nd(p);
    rep.kv("conclusion", print_formula(nd.root->concl));
    rep.block("script", print_nd(nd));
    if (!check_nd(nd).ok()) throw Error("translated tree does not check");
    rep.kv("check", "ok");
    return 0;
  }
  if (kw == "nd") {
    NDProof p = parse_nd(text, sig);
    std::string natural = p.system == NDSystem::NI ? "HI" : "HC";
    if (!o.system.empty() && o.system != natural)
      throw UsageError("a " + nd_system_name(p.system) +
                       " script translates to " + natural);
    if (!check_nd(p).ok()) {
      rep.kv("check", "input script fails its checker");
      return 1;
    }
    HilbertProof h = nd_to_hilbert(p);
    rep.kv("conclusion", print_formula(h.conclusion()));
    rep.block("script", print_hilbert(h));
    if (!check_hilbert(h.system, h).ok())
      throw Error("translated script does not check");
    rep.kv("check", "ok");
    return 0;
  }
  throw UsageError("unrecognized script (expected hilbert or nd)");
}

// Stdout stays a reparseable sim file (metadata in # comments), so the
// output pipes straight into `extract`.
int cmd_flatten(const Opts& o, const Report&) {
  if (o.file.empty()) throw UsageError("flatten needs a proof script file");
  Signature sig;
  HilbertProof p = parse_hilbert(slurp(o.file), sig);
  CompileResult cr = compile_hilbert_to_base(p);
  std::string why;
  if (!check_trace(cr.sim.base, cr.trace, &why))
    throw Error("compiled trace does not check: " + why);
  if (!audit_sim(cr.sim).ok()) throw Error("simulation base fails its audit");
  std::cout << print_simbase(cr.sim);
  std::cout << "# goal: " << print_atom(cr.goal) << "\n";
  std::cout << "# hyps: " << join_atoms(cr.hyp_atoms) << "\n";
  return 0;
}

int cmd_extract(const Opts& o, const Report& rep) {
  if (o.file.empty() || o.goal.empty())
    throw UsageError("extract needs a simulation base file and --goal");
  SimulationBase sim = parse_simbase(slurp(o.file));
  Signature sig;
  GroundAtom goal = sim.map.flat(expand(parse_formula(o.goal, sig)));
  std::set<GroundAtom> hyps;
  for (auto& h : parse_formula_list(o.hyps, sig))
    hyps.insert(sim.map.flat(expand(h)));
  rep.kv("query", join_atoms(hyps) + " |- " + print_atom(goal));
  Verdict v = derive(sim.base, hyps, goal, DeriveMode::Saturate);
  if (v.kind != Verdict::Derivable) {
    rep.kv("verdict", "NotDerivable");
    return 1;
  }
  rep.kv("verdict", "Derivable");
  HilbertProof out = extract_hilbert_from_base(sim, v.trace);
  rep.block("script", print_hilbert(out));
  if (!check_hilbert(out.system, out).ok())
    throw Error("extracted script does not check");
  rep.kv("check", "ok");
  return 0;
}

int cmd_support(const Opts& o, const Report& rep) {
  if (o.universe_file.empty() || o.goal.empty())
    throw UsageError("support needs --universe and --goal");
  if (!o.base_file.empty() && !o.hyps.empty())
    throw UsageError("--base fixes a base; --hyps asks the consequence "
                     "question over all bases — pick one");
  Signature sig;
  SupportUniverse u = parse_universe(slurp(o.universe_file), sig);
  if (o.policy == "I") u.policy = BasisPolicy::I;
  else if (o.policy == "C") u.policy = BasisPolicy::C;
  FormulaRef goal = parse_formula(o.goal, sig);
  rep.kv("universe", u.name);
  rep.kv("policy", policy_name(u.policy));
  SupportResult r;
  if (!o.hyps.empty()) {
    std::vector<FormulaRef> gamma = parse_formula_list(o.hyps, sig);
    std::string gs;
    for (auto& g : gamma) {
      if (!gs.empty()) gs += ", ";
      gs += print_formula(g);
    }
    rep.kv("query", gs + " |= " + print_formula(goal));
    r = supports_consequence(gamma, goal, u);
  } else {
    Base b;
    if (!o.base_file.empty()) b = parse_base(slurp(o.base_file), sig);
    rep.kv("base", o.base_file.empty() ? "(empty)" : b.name);
    rep.kv("query", (o.hyps.empty() ? "" : o.hyps + " ") + "|= " +
                        print_formula(goal));
    r = supports(b, goal, u);
  }
  rep.kv("verdict", support_kind_name(r.kind));
  if (r.kind != SupportKind::Fails) return 0;
  rep.block("witness base", print_base(r.witness.base));
  rep.kv("witness formula", print_formula(r.witness.formula));
  if (!check_witness(r.witness, u)) throw Error("witness does not replay");
  rep.kv("witness check", "ok");
  return 1;
}

// --- canned walkthroughs -------------------------------------------------------

int demo_aristotle(const Report& rep) {
  Signature sig;
  Base b = parse_base("base aristotle { => H(s)\n  H(s) => M(s) }", sig);
  std::cout << print_base(b);
  GroundAtom goal = parse_atom_str("M(s)", sig);
  rep.kv("query", "|- " + print_atom(goal));
  Verdict v = derive(b, {}, goal, DeriveMode::Saturate);
  rep.kv("verdict",
         v.kind == Verdict::Derivable ? "Derivable" : "NotDerivable");
  if (v.kind != Verdict::Derivable) return 1;
  rep.block("trace", print_trace(v.trace));
  rep.kv("trace check", check_trace(b, v.trace, nullptr) ? "ok" : "failed");
  return 0;
}

int demo_tammy(const Report& rep) {
  Signature sig;
  Base b = parse_base(
      "base vixen { V(t) => Fe(t)\n  V(t) => Fo(t)\n  Fe(t), Fo(t) => V(t) }",
      sig);
  std::cout << print_base(b);
  struct Q {
    const char* hyps;
    const char* goal;
  } queries[] = {{"V(t)", "Fe(t)"}, {"V(t)", "Fo(t)"}, {"Fe(t), Fo(t)", "V(t)"}};
  for (auto& q : queries) {
    std::set<GroundAtom> hyps = parse_atom_set(q.hyps, sig);
    GroundAtom goal = parse_atom_str(q.goal, sig);
    rep.kv("query", join_atoms(hyps) + " |- " + print_atom(goal));
    Verdict v = derive(b, hyps, goal, DeriveMode::Saturate);
    if (v.kind != Verdict::Derivable) {
      rep.kv("verdict", "NotDerivable");
      return 1;
    }
    rep.kv("verdict", "Derivable");
    rep.block("trace", print_trace(v.trace));
  }
  return 0;
}

int demo_dne_counterexample(const Report& rep) {
  Signature sig;
  SupportUniverse u = parse_universe(
      "universe dneland {\n"
      "  rules { ([A] => B) => B\n  => A\n  B => *\n  A => * }\n"
      "  slice_preds { A:0, B:0, C:0 }\n"
      "  budget 1\n  policy I\n  depth 8\n}",
      sig);
  std::cout << print_universe(u);
  Base a = parse_base("base a { ([A] => B) => B\n  B => * }", sig);
  std::cout << print_base(a);
  for (auto* g : {"A", "B"}) {
    GroundAtom goal = parse_atom_str(g, sig);
    Verdict v = derive(a, {}, goal, DeriveMode::Saturate);
    rep.kv("|- " + print_atom(goal),
           v.kind == Verdict::NotDerivable ? "NotDerivable" : "Derivable");
  }
  FormulaRef query = parse_formula("~~A -> A", sig);
  rep.kv("query", "|= " + print_formula(query));
  SupportResult ri = supports_consequence({}, query, u);
  rep.kv("policy I verdict", support_kind_name(ri.kind));
  if (ri.kind == SupportKind::Fails) {
    rep.block("witness base", print_base(ri.witness.base));
    rep.kv("witness check", check_witness(ri.witness, u) ? "ok" : "failed");
  }
  u.policy = BasisPolicy::C;
  SupportResult rc = supports_consequence({}, query, u);
  rep.kv("policy C verdict", support_kind_name(rc.kind));
  return ri.kind == SupportKind::Fails && rc.kind != SupportKind::Fails ? 0
                                                                        : 1;
}

int demo_completeness_roundtrip(const Report& rep) {
  HilbertProof p = derive_identity(SystemId::HI, f_atom0("P"));
  rep.block("script", print_hilbert(p));
  rep.kv("script check", check_hilbert(p.system, p).ok() ? "ok" : "failed");
  CompileResult cr = compile_hilbert_to_base(p);
  std::cout << print_simbase(cr.sim);
  rep.kv("goal", print_atom(cr.goal));
  rep.block("trace", print_trace(cr.trace));
  std::string why;
  rep.kv("trace check",
         check_trace(cr.sim.base, cr.trace, &why) ? "ok" : "failed: " + why);
  HilbertProof back = extract_hilbert_from_base(cr.sim, cr.trace);
  rep.block("extracted script", print_hilbert(back));
  bool ok = check_hilbert(back.system, back).ok() &&
            eq(back.conclusion(), p.conclusion());
  rep.kv("extracted check", ok ? "ok" : "failed");
  return ok ? 0 : 1;
}

int cmd_demo(const Opts& o, const Report& rep) {
  if (o.demo == "aristotle") return demo_aristotle(rep);
  if (o.demo == "tammy") return demo_tammy(rep);
  if (o.demo == "dne-counterexample") return demo_dne_counterexample(rep);
  if (o.demo == "completeness-roundtrip")
    return demo_completeness_roundtrip(rep);
  throw UnknownDemo("no demo named " + o.demo);
}

}  // namespace

int main(int argc, char** argv) {
  Opts o;
  CLI::App app{"base-extension semantics workbench"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* c) {
    c->add_option("--format", o.format, "text or tsv")
        ->check(CLI::IsMember({"text", "tsv"}));
    c->add_option("--seed", o.seed, "generator seed (default 0)");
  };

  CLI::App* c_parse = app.add_subcommand("parse", "reprint canonical form");
  c_parse->add_option("--goal", o.goal, "formula text");
  c_parse->add_option("--base", o.base_file, "base file");
  c_parse->add_option("--universe", o.universe_file, "universe file");
  c_parse->add_option("file", o.file, "script/base/universe/sim file");

  CLI::App* c_derive =
      app.add_subcommand("derive", "atomic derivability in a base");
  c_derive->add_option("--base", o.base_file, "base file")->required();
  c_derive->add_option("--goal", o.goal, "goal atom")->required();
  c_derive->add_option("--hyps", o.hyps, "comma-separated hypothesis atoms");
  c_derive->add_option("--depth", o.depth,
                       "bounded top-down search instead of saturation");

  CLI::App* c_check = app.add_subcommand("check", "check a proof script");
  c_check->add_option("file", o.file, "hilbert or nd script")->required();
  c_check->add_option("--system", o.system, "HI, HC, NI or NC")
      ->check(CLI::IsMember({"HI", "HC", "NI", "NC"}));

  CLI::App* c_prove =
      app.add_subcommand("prove", "bounded backward proof search");
  c_prove->add_option("--goal", o.goal, "goal formula")->required();
  c_prove->add_option("--hyps", o.hyps, "comma-separated hypothesis formulas");
  c_prove->add_option("--system", o.system, "HI or HC (default HI)")
      ->check(CLI::IsMember({"HI", "HC"}));
  c_prove->add_option("--depth", o.depth, "search depth (default 6)");

  CLI::App* c_translate =
      app.add_subcommand("translate", "hilbert <-> natural deduction");
  c_translate->add_option("file", o.file, "hilbert or nd script")->required();
  c_translate->add_option("--system", o.system, "expected target system")
      ->check(CLI::IsMember({"HI", "HC", "NI", "NC"}));

  CLI::App* c_flatten = app.add_subcommand(
      "flatten", "compile a hilbert script to a simulation base");
  c_flatten->add_option("file", o.file, "hilbert script")->required();

  CLI::App* c_extract = app.add_subcommand(
      "extract", "recover a hilbert script from a simulation base");
  c_extract->add_option("file", o.file, "simulation base file")->required();
  c_extract->add_option("--goal", o.goal, "goal formula")->required();
  c_extract->add_option("--hyps", o.hyps, "comma-separated hypothesis formulas");

  CLI::App* c_support =
      app.add_subcommand("support", "semantic support in a universe");
  c_support->add_option("--universe", o.universe_file, "universe file")
      ->required();
  c_support->add_option("--goal", o.goal, "formula")->required();
  c_support->add_option("--base", o.base_file, "base file (admissible subset)");
  c_support->add_option("--hyps", o.hyps,
                        "comma-separated premises (consequence query)");
  c_support->add_option("--policy", o.policy, "override the file's policy")
      ->check(CLI::IsMember({"I", "C"}));

  CLI::App* c_demo = app.add_subcommand("demo", "canned walkthroughs");
  c_demo->add_option("name", o.demo,
                     "aristotle | tammy | dne-counterexample | "
                     "completeness-roundtrip")
      ->required();

  for (auto* c : {c_parse, c_derive, c_check, c_prove, c_translate, c_flatten,
                  c_extract, c_support, c_demo})
    add_common(c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  Report rep;
  rep.tsv = o.format == "tsv";
  try {
    if (app.got_subcommand(c_parse)) return cmd_parse(o, rep);
    if (app.got_subcommand(c_derive)) return cmd_derive(o, rep);
    if (app.got_subcommand(c_check)) return cmd_check(o, rep);
    if (app.got_subcommand(c_prove)) return cmd_prove(o, rep);
    if (app.got_subcommand(c_translate)) return cmd_translate(o, rep);
    if (app.got_subcommand(c_flatten)) return cmd_flatten(o, rep);
    if (app.got_subcommand(c_extract)) return cmd_extract(o, rep);
    if (app.got_subcommand(c_support)) return cmd_support(o, rep);
    if (app.got_subcommand(c_demo)) return cmd_demo(o, rep);
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const UnknownDemo& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const ArityMismatch& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const DanglingReference& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cout << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
