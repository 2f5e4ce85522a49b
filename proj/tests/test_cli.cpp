// End-to-end checks of the besw binary: exit codes, report phrasing, and
// byte-for-byte determinism. Invoked as: test_cli <besw> <samples-dir>
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

int failures = 0;

struct Res {
  int code;
  std::string out;
};

Res run_cmd(const std::string& cmd) {
  std::string full = cmd + " 2>&1";
  FILE* p = popen(full.c_str(), "r");
  if (!p) {
    std::cerr << "popen failed for: " << cmd << "\n";
    std::exit(3);
  }
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : 128, out};
}

void expect(const std::string& cmd, int want,
            const std::vector<std::string>& needles = {}) {
  Res r = run_cmd(cmd);
  bool ok = r.code == want;
  std::string missing;
  for (auto& s : needles)
    if (r.out.find(s) == std::string::npos) {
      ok = false;
      missing += " [missing: " + s + "]";
    }
  if (ok) {
    std::cout << "ok   " << cmd << "\n";
    return;
  }
  ++failures;
  std::cout << "FAIL " << cmd << "\n  exit " << r.code << ", want " << want
            << missing << "\n--- output ---\n"
            << r.out << "--------------\n";
}

std::string q(const std::string& s) { return "'" + s + "'"; }

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: test_cli <besw> <samples-dir>\n";
    return 2;
  }
  std::string besw = argv[1];
  std::string S = argv[2];

  // atomic derivations
  std::string aristotle =
      besw + " derive --base " + S + "/aristotle.base --goal " + q("M(s)");
  expect(aristotle, 0, {"verdict: Derivable", "trace check: ok"});
  expect(besw + " derive --base " + S + "/aristotle.base --goal " + q("Z"), 1,
         {"verdict: NotDerivable"});
  expect(besw + " derive --base " + S + "/vixen.base --goal " + q("V(t)") +
             " --hyps " + q("Fe(t), Fo(t)"),
         0, {"verdict: Derivable"});
  expect(besw + " derive --base " + S + "/aristotle.base --goal " + q("M(s)") +
             " --format tsv",
         0, {"verdict\tDerivable"});

  // identical invocations must produce identical bytes
  Res a1 = run_cmd(aristotle);
  Res a2 = run_cmd(aristotle);
  if (a1.out != a2.out || a1.code != a2.code) {
    ++failures;
    std::cout << "FAIL repeated run differs: " << aristotle << "\n";
  } else {
    std::cout << "ok   repeated run is byte-identical\n";
  }

  // proof script checking
  expect(besw + " check " + S + "/identity.hp", 0, {"check: ok"});
  expect(besw + " check " + S + "/dne.hp", 0, {"check: ok"});
  expect(besw + " check --system HI " + S + "/dne.hp", 1,
         {"check: failed", "step 1"});
  expect(besw + " check " + S + "/no-such-file.hp", 2);

  // usage and parse failures
  expect(besw, 2);
  expect(besw + " parse --goal " + q("A -> ("), 2, {"parse error"});
  expect(besw + " parse --goal " + q("A -> B"), 0, {"A -> B"});
  expect(besw + " parse --base " + S + "/vixen.base", 0, {"base vixen"});

  // bounded proof search separates the calculi
  expect(besw + " prove --system HC --goal " + q("~~P -> P") + " --depth 2", 0,
         {"verdict: Found at depth", "check: ok"});
  expect(besw + " prove --system HI --goal " + q("~~P -> P") + " --depth 2", 1,
         {"verdict: NotFound (bounded evidence"});

  // translation round trips through the checker
  expect(besw + " translate " + S + "/identity.hp", 0,
         {"conclusion: A -> A", "check: ok"});

  // flatten composes with extract through a file
  Res fl = run_cmd(besw + " flatten " + S + "/identity.hp");
  if (fl.code != 0 || fl.out.rfind("sim J", 0) != 0) {
    ++failures;
    std::cout << "FAIL flatten: exit " << fl.code << "\n--- output ---\n"
              << fl.out << "--------------\n";
  } else {
    std::cout << "ok   flatten emits a simulation base\n";
    std::string tmp = "/tmp/besw_cli_sim.sb";
    std::ofstream(tmp) << fl.out;
    expect(besw + " extract " + tmp + " --goal " + q("A -> A"), 0,
           {"verdict: Derivable", "check: ok"});
    expect(besw + " extract " + tmp + " --goal " + q("A"), 1,
           {"verdict: NotDerivable"});
  }

  // support queries against the bundled universe
  expect(besw + " support --universe " + S + "/dne.universe --goal " +
             q("~~A -> A"),
         1, {"verdict: Fails", "witness check: ok"});
  expect(besw + " support --universe " + S + "/dne.universe --goal " +
             q("~~A -> A") + " --policy C",
         0);
  expect(besw + " support --universe " + S + "/dne.universe --goal " +
             q("A -> A"),
         0);

  // demos
  expect(besw + " demo aristotle", 0, {"trace check: ok"});
  expect(besw + " demo tammy", 0, {"verdict: Derivable"});
  expect(besw + " demo dne-counterexample", 0,
         {"policy I verdict: Fails", "witness check: ok"});
  expect(besw + " demo completeness-roundtrip", 0, {"script check: ok"});
  expect(besw + " demo nope", 2);

  if (failures) {
    std::cout << failures << " command(s) failed\n";
    return 1;
  }
  std::cout << "all command checks passed\n";
  return 0;
}
