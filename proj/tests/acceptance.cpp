// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sys/wait.h>

#include "support.hpp"

namespace fs = std::filesystem;
using namespace loopforge;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string cmd = std::string(LOOPFORGE_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string dir_contents(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& f : fs::directory_iterator(dir)) files.push_back(f.path());
  std::sort(files.begin(), files.end());
  std::string s;
  for (const auto& f : files) s += f.filename().string() + "\n" + read_text_file(f.string());
  return s;
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("loopforge_acceptance_" + name);
  fs::remove_all(p);
  return p;
}

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail, Clock::time_point t0) {
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  char tbuf[32];
  std::snprintf(tbuf, sizeof tbuf, "%.2fs", secs);
  std::cout << (ok ? "PASS " : "FAIL ") << name << " (" << detail << ", " << tbuf << ")" << std::endl;
  if (!ok) ++failures;
}

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void nonexistence_below_6() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::size_t loops = 0;
  for (std::size_t n = 2; n <= 5; ++n) {
    for (const auto& q : enumerate_loops(SearchConfig::jordan(n)).tables) {
      ++loops;
      ok = ok && is_jordan(q) && is_associative(q);
    }
  }
  ok = ok && since(t0) < 10.0;
  report("nonexistence-below-6", ok, std::to_string(loops) + " Jordan loops of order 2..5, all associative", t0);
}

void existence_6_to_8() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  for (const int n : {6, 7, 8}) {
    const auto tn = Clock::now();
    const auto dir = scratch("exist" + std::to_string(n));
    const auto r = cli("enumerate " + std::to_string(n) + " --jordan --nonassociative-only --out " + dir.string());
    std::size_t found = 0;
    bool verified = r.code == 0;
    if (verified) {
      for (const auto& f : fs::directory_iterator(dir)) {
        if (f.path().extension() != ".loop") continue;
        ++found;
        const auto q = read_table_file(f.path().string());
        verified = verified && q.order() == static_cast<std::size_t>(n) && is_jordan(q) && !is_associative(q);
      }
    }
    const double limit = n == 6 ? 60.0 : 1800.0;
    ok = ok && verified && found >= 1 && since(tn) < limit;
    detail += (detail.empty() ? "" : ", ") + std::string("n=") + std::to_string(n) + ": " + std::to_string(found);
    fs::remove_all(dir);
  }
  report("existence-6-to-8", ok, "nonassociative Jordan loops " + detail, t0);
}

void suite_master_property() {
  const auto t0 = Clock::now();
  std::size_t loops = 0, reports = 0, fails = 0;
  for (std::size_t n = 1; n <= 7; ++n) {
    for (const auto& q : enumerate_loops(SearchConfig::jordan(n)).tables) {
      ++loops;
      const auto rs = run_full_suite(q, 2 * static_cast<int>(n) + 8);
      reports += rs.size();
      for (const auto& r : rs) {
        if (r.status == Status::Fail) {
          ++fails;
          std::cerr << "order " << n << ": " << format_report_line(r) << "\n";
        }
      }
    }
  }
  report("suite-master-property", loops > 0 && fails == 0,
         std::to_string(loops) + " loops, " + std::to_string(reports) + " reports, " + std::to_string(fails) + " failures", t0);
}

void witness_6_6() {
  const auto t0 = Clock::now();
  const auto w = find_power_witness(6, 6);
  bool ok = w.has_value();
  std::string detail = "find_power_witness(6, 6) returned none; exhaustive order-6 Jordan search has no generator with ill-defined x^6";
  if (w) {
    const auto prof = power_profile(w->loop, w->generator, 6);
    const auto g = lftest::grid_of(w->loop);
    for (int k = 1; k <= 6; ++k) {
      const auto oracle = lftest::bracketings(g, w->generator, k);
      std::set<int> mine;
      for_each_bit(prof.bracket_sets[k], [&](Element v) { mine.insert(v); });
      ok = ok && oracle == mine && prof.well_defined[k] == (k < 6);
    }
    ok = ok && is_jordan(w->loop) && closure(w->loop, bit(w->generator)) == w->loop.all();
    detail = "generator " + std::to_string(w->generator) + ", x^6 has " +
             std::to_string(lftest::bracketings(g, w->generator, 6).size()) + " values";
  }
  report("witness-6-6", ok, detail, t0);
}

void involution_parity() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::size_t loops = 0;
  for (std::size_t n = 4; n <= 8; ++n) {
    for (const auto& q : enumerate_loops(SearchConfig::commutative(n)).tables) {
      ++loops;
      bool root = true;
      try {
        square_root_map(q);
      } catch (const LoopError&) {
        root = false;
      }
      ok = ok && has_nontrivial_involution(q) == (n % 2 == 0) && root == (n % 2 == 1);
    }
  }
  report("involution-sqrt-parity", ok, std::to_string(loops) + " commutative loops of order 4..8", t0);
}

void subloop_bound() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::size_t loops = 0, proper = 0;
  auto check = [&](const LoopTable& q) {
    ++loops;
    for (const auto& h : all_subloops(q)) {
      if (h.carrier == q.all()) continue;
      ++proper;
      ok = ok && h.size() <= q.order() / 2;
    }
  };
  for (std::size_t n = 1; n <= 7; ++n) {
    for (const auto& q : enumerate_loops(SearchConfig::loops(n)).tables) check(q);
  }
  for (const auto& q : enumerate_loops(SearchConfig::commutative(8)).tables) check(q);
  report("subloop-half-bound", ok,
         std::to_string(loops) + " loops (all of order <= 7, commutative of order 8), " + std::to_string(proper) +
             " proper subloops",
         t0);
}

void order9_certificate() {
  const auto t0 = Clock::now();
  const auto r = cli("certify-order9 --jobs 1");
  const auto cert = order9::certify_order9();
  const auto& cy = cert.cyclic_case;
  const auto& ex = cert.exponent3_case;
  bool branches = cy.branches.size() == 2 && cy.branches[0].cube_square == 1 && cy.branches[0].completions == 0 &&
                  cy.branches[1].cube_square == 6 && cy.branches[1].completions > 0 &&
                  cy.branches[1].isomorphic_to_z9 == cy.branches[1].completions;
  bool z3 = ex.iso_classes == 1 && ex.unique_class_is_z3xz3;
  const bool ok = r.code == 0 && cert.conclusion && branches && z3 && since(t0) < 300.0;
  report("order9-certificate", ok,
         "exponent-3 classes " + std::to_string(ex.iso_classes) + ", x^3x^3=x completions " +
             std::to_string(cy.branches.empty() ? 0 : cy.branches[0].completions) + ", conclusion " +
             (cert.conclusion ? "true" : "false"),
         t0);
}

void order9_exhaustive() {
  const auto t0 = Clock::now();
  const auto e = enumerate_loops(SearchConfig::jordan(9));
  std::set<CanonicalForm> got, want = {canonical_form(cyclic_group(9)),
                                       canonical_form(direct_product(cyclic_group(3), cyclic_group(3)))};
  bool assoc = true;
  for (const auto& q : e.tables) {
    got.insert(canonical_form(q));
    assoc = assoc && is_associative(q);
  }
  report("order9-exhaustive", got == want && assoc && e.tables.size() == 2,
         std::to_string(e.tables.size()) + " classes, " + std::to_string(e.stats.nodes_expanded) + " nodes", t0);
}

void oracle_equivalence() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::size_t compared = 0;
  for (std::size_t n = 1; n <= 5; ++n) {
    for (int kind = 0; kind < 3; ++kind) {
      SearchConfig fast = kind == 0 ? SearchConfig::loops(n) : kind == 1 ? SearchConfig::commutative(n) : SearchConfig::jordan(n);
      SearchConfig slow = fast;
      slow.propagate = false;
      std::set<CanonicalForm> a, b;
      for (const auto& q : enumerate_loops(fast).tables) a.insert(canonical_form(q));
      for (const auto& q : enumerate_loops(slow).tables) b.insert(canonical_form(q));
      ok = ok && a == b;
      compared += a.size();
    }
  }
  report("oracle-equivalence", ok, std::to_string(compared) + " classes compared at n <= 5", t0);
}

void determinism() {
  const auto t0 = Clock::now();
  const std::string f = lftest::fixture("tablef.loop");
  const std::vector<std::string> commands = {
      "check " + f,
      "powers " + f,
      "suite " + f + " --json",
      "suite " + f,
      "iso " + f + " " + lftest::fixture("z3xz3.loop"),
      "enumerate 7 --jordan --jobs 1",
      "enumerate 8 --commutative --count-only --jobs 1",
      "certify-order9 --json --jobs 1",
      "certify-order9 --exhaustive --jobs 1",
      "witness 6 6 --jobs 1 --out " + scratch("witness").string(),
  };
  bool ok = true;
  std::size_t runs = 0;
  for (const auto& c : commands) {
    const auto a = cli(c);
    const auto b = cli(c);
    ok = ok && a.code == b.code && a.out == b.out;
    runs += 2;
  }
  const auto p1 = scratch("det1"), p2 = scratch("det2");
  const auto a = cli("enumerate 8 --jordan --jobs 1 --out " + p1.string());
  const auto b = cli("enumerate 8 --jordan --jobs 1 --out " + p2.string());
  ok = ok && a.code == 0 && b.code == 0 && a.out == b.out && dir_contents(p1) == dir_contents(p2);
  runs += 2;
  fs::remove_all(p1);
  fs::remove_all(p2);
  report("determinism", ok, std::to_string(runs) + " command runs compared byte for byte", t0);
}

}  // namespace

int main() {
  nonexistence_below_6();
  existence_6_to_8();
  suite_master_property();
  witness_6_6();
  involution_parity();
  subloop_bound();
  order9_certificate();
  order9_exhaustive();
  oracle_equivalence();
  determinism();
  std::cout << (failures == 0 ? "all acceptance criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
