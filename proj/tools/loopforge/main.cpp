// loopforge command-line front end.
//
// Exit codes: 0 success, 1 negative result or failed predicate, 2 usage or
// input validation error. check and powers report an unreadable table with 1.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "loopforge/loopforge.hpp"

namespace lf = loopforge;

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kUsage = 2;

int fail(const std::exception& e, int code) {
  std::cerr << e.what() << "\n";
  return code;
}

// LOOPFORGE_CAP may raise the enumeration order cap.
std::size_t order_cap() {
  const char* env = std::getenv("LOOPFORGE_CAP");
  if (!env || !*env) return lf::kDefaultOrderCap;
  const int cap = lf::detail::parse_int(env, "LOOPFORGE_CAP");
  if (cap < 1) throw lf::LoopError(lf::ErrorKind::InvalidConfig, "LOOPFORGE_CAP must be positive");
  return static_cast<std::size_t>(cap);
}

std::string join(const std::vector<lf::Element>& v) {
  std::string s;
  for (const auto x : v) s += (s.empty() ? "" : " ") + std::to_string(x);
  return s;
}

std::string mask_elements(lf::Mask m) {
  std::string s;
  lf::for_each_bit(m, [&](lf::Element x) { s += (s.empty() ? "" : " ") + std::to_string(x); });
  return s;
}

int cmd_check(const std::string& file) {
  lf::LoopTable q = lf::LoopTable::from_cells(1, {0});
  try {
    q = lf::read_table_file(file);
  } catch (const lf::LoopError& e) {
    return fail(e, kNegative);
  }
  const std::size_t n = q.order();
  const bool comm = lf::is_commutative(q);
  const bool jordan = lf::is_jordan(q);
  const bool assoc = lf::is_associative(q);
  std::string summary = "order " + std::to_string(n);
  if (n == 1) {
    summary += ", group";
  } else {
    summary += comm ? ", commutative" : ", noncommutative";
    if (jordan) summary += ", Jordan";
    summary += assoc ? ", associative (group)" : ", nonassociative";
  }
  std::cout << summary << "\n";

  const auto diag = lf::diagonal_stats(q);
  std::cout << "diagonal:";
  for (std::size_t v = 0; v < n; ++v) {
    if (diag[v]) std::cout << " " << v << "x" << diag[v];
  }
  std::cout << "\n";
  std::cout << "nontrivial involution: " << (lf::has_nontrivial_involution(q) ? "yes" : "no") << "\n";
  if (n <= lf::kDefaultSubloopOrderBound) {
    const auto subs = lf::all_subloops(q);
    std::cout << "subloops: " << subs.size() << "\n";
    for (const auto& s : subs) std::cout << "  {" << mask_elements(s.carrier) << "}\n";
  }
  return kOk;
}

int cmd_powers(const std::string& file, std::optional<int> max_exp) {
  lf::LoopTable q = lf::LoopTable::from_cells(1, {0});
  try {
    q = lf::read_table_file(file);
  } catch (const lf::LoopError& e) {
    return fail(e, kNegative);
  }
  const int k = max_exp.value_or(lf::default_max_exp(q.order()));
  if (k < 1) {
    std::cerr << "InvalidConfig --max-exp must be positive\n";
    return kUsage;
  }
  for (std::size_t xi = 0; xi < q.order(); ++xi) {
    const auto p = lf::power_profile(q, static_cast<lf::Element>(xi), k);
    const auto bad = p.first_ill_defined();
    std::vector<lf::Element> powers(p.rpow.begin() + 1, p.rpow.end());
    std::cout << "x=" << xi << " inverse=" << int(p.inverse) << " subloop=" << p.subloop_order
              << " first-ill-defined=" << (bad ? std::to_string(*bad) : std::string("none")) << " rpow=" << join(powers)
              << "\n";
  }
  return kOk;
}

int cmd_suite(const std::string& file, std::optional<int> max_exp, bool json) {
  try {
    const auto q = lf::read_table_file(file);
    const int k = max_exp.value_or(lf::default_max_exp(q.order()));
    if (k < 1) throw lf::LoopError(lf::ErrorKind::InvalidConfig, "--max-exp must be positive");
    const auto reports = lf::run_full_suite(q, k);
    if (json) {
      std::cout << lf::reports_to_json(reports).dump(2) << "\n";
    } else {
      std::cout << lf::format_reports(reports);
    }
    return lf::any_failed(reports) ? kNegative : kOk;
  } catch (const lf::LoopError& e) {
    return fail(e, kUsage);
  }
}

struct EnumerateArgs {
  int order = 0;
  bool jordan = false, commutative = false, up_to_iso = false, labeled = false;
  bool nonassociative_only = false, count_only = false, timing = false;
  std::optional<std::size_t> limit;
  std::size_t jobs = 1;
  std::optional<std::string> out;
};

int cmd_enumerate(const EnumerateArgs& a) {
  lf::SearchConfig cfg;
  try {
    if (a.order < 1) throw lf::LoopError(lf::ErrorKind::InvalidConfig, "order must be positive");
    const auto n = static_cast<std::size_t>(a.order);
    cfg = a.jordan ? lf::SearchConfig::jordan(n) : a.commutative ? lf::SearchConfig::commutative(n) : lf::SearchConfig::loops(n);
    cfg.up_to_iso = !a.labeled;
    cfg.nonassociative_only = a.nonassociative_only;
    cfg.limit = a.limit;
    cfg.worker_count = a.jobs;
    cfg.order_cap = order_cap();
    cfg.validate();
  } catch (const lf::LoopError& e) {
    return fail(e, e.kind() == lf::ErrorKind::OrderTooLarge ? kNegative : kUsage);
  }
  const auto result = lf::enumerate_loops(cfg);
  if (a.out) {
    lf::write_enumeration(*a.out, cfg, result, a.count_only, a.timing);
  } else if (!a.count_only) {
    for (const auto& q : result.tables) std::cout << lf::format_table(q) << "\n";
  }
  std::cout << "count " << result.tables.size() << "\n";
  std::cout << "nodes " << result.stats.nodes_expanded << "\n";
  if (a.timing) std::cout << "wall_time_ms " << result.stats.wall_time.count() << "\n";
  return kOk;
}

int cmd_iso(const std::string& f1, const std::string& f2) {
  try {
    const auto a = lf::read_table_file(f1);
    const auto b = lf::read_table_file(f2);
    const auto phi = lf::isomorphism(a, b);
    if (!phi) {
      std::cout << "not isomorphic\n";
      return kNegative;
    }
    std::cout << "isomorphic\n";
    for (std::size_t x = 0; x < phi->size(); ++x) std::cout << x << " -> " << int((*phi)[x]) << "\n";
    return kOk;
  } catch (const lf::LoopError& e) {
    return fail(e, kUsage);
  }
}

int cmd_witness(int n, int k, const std::string& out, std::size_t jobs) {
  std::optional<lf::PowerWitness> w;
  try {
    if (n < 1) throw lf::LoopError(lf::ErrorKind::InvalidConfig, "order must be positive");
    w = lf::find_power_witness(static_cast<std::size_t>(n), k, jobs, order_cap());
  } catch (const lf::LoopError& e) {
    return fail(e, e.kind() == lf::ErrorKind::OrderTooLarge ? kNegative : kUsage);
  }
  if (!w) {
    std::cout << "no witness for order " << n << " and exponent " << k << "\n";
    return kNegative;
  }
  lf::write_text_file(out, lf::format_table(w->loop));
  const auto p = lf::power_profile(w->loop, w->generator, k);
  std::cout << "witness order " << n << " generator " << int(w->generator) << " first-ill-defined " << k << "\n";
  std::cout << "bracketings of x^" << k << ": {" << mask_elements(p.bracket_sets[k]) << "}\n";
  std::cout << "wrote " << out << "\n";
  return kOk;
}

int cmd_certify(bool exhaustive, bool json, const std::optional<std::string>& out, std::size_t jobs) {
  lf::order9::CertifyOptions opt;
  opt.exhaustive = exhaustive;
  opt.workers = jobs;
  const auto cert = lf::order9::certify_order9(opt);
  const auto j = lf::order9::certificate_to_json(cert);
  if (json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << lf::order9::format_certificate(cert);
  }
  if (out) lf::write_text_file(*out, j.dump(2) + "\n");
  return cert.conclusion ? kOk : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite loop toolkit: Jordan loops, powers, enumeration"};
  app.require_subcommand(1);

  std::string file, file2;
  std::optional<int> max_exp;
  bool json = false;

  auto* check = app.add_subcommand("check", "Validate a table and print its properties");
  check->add_option("file", file, "Table file")->required();

  auto* powers = app.add_subcommand("powers", "Per-element power profile");
  powers->add_option("file", file, "Table file")->required();
  powers->add_option("--max-exp", max_exp, "Largest exponent");

  auto* suite = app.add_subcommand("suite", "Run the power identity suite");
  suite->add_option("file", file, "Table file")->required();
  suite->add_option("--max-exp", max_exp, "Largest exponent");
  suite->add_flag("--json", json, "JSON output");

  EnumerateArgs ea;
  auto* enumerate = app.add_subcommand("enumerate", "Enumerate loops of a given order");
  enumerate->add_option("n", ea.order, "Order")->required();
  enumerate->add_flag("--jordan", ea.jordan, "Jordan loops only");
  enumerate->add_flag("--commutative", ea.commutative, "Commutative loops only");
  enumerate->add_flag("--up-to-iso", ea.up_to_iso, "One table per isomorphism class (default)");
  enumerate->add_flag("--labeled", ea.labeled, "Every labeled table instead of one per class");
  enumerate->add_flag("--nonassociative-only", ea.nonassociative_only, "Skip groups");
  enumerate->add_flag("--count-only", ea.count_only, "Do not print or write tables");
  enumerate->add_option("--limit", ea.limit, "Stop after this many results");
  enumerate->add_option("--jobs", ea.jobs, "Worker threads")->check(CLI::PositiveNumber);
  enumerate->add_option("--out", ea.out, "Output directory");
  enumerate->add_flag("--timing", ea.timing, "Report wall time");

  auto* iso = app.add_subcommand("iso", "Test two tables for isomorphism");
  iso->add_option("file1", file, "First table")->required();
  iso->add_option("file2", file2, "Second table")->required();

  int wn = 0, wk = 0;
  std::string wout = "witness.loop";
  std::size_t jobs = 1;
  auto* witness = app.add_subcommand("witness", "Find a Jordan loop whose generator has x^k ill-defined");
  witness->add_option("n", wn, "Order")->required();
  witness->add_option("k", wk, "Exponent")->required();
  witness->add_option("--out", wout, "Output file");
  witness->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  bool exhaustive = false;
  std::optional<std::string> cert_out;
  auto* certify = app.add_subcommand("certify-order9", "Certify that Jordan loops of order 9 are groups");
  certify->add_flag("--exhaustive", exhaustive, "Also enumerate every order-9 Jordan loop");
  certify->add_flag("--json", json, "JSON output");
  certify->add_option("--out", cert_out, "Write the JSON certificate here");
  certify->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*check) return cmd_check(file);
    if (*powers) return cmd_powers(file, max_exp);
    if (*suite) return cmd_suite(file, max_exp, json);
    if (*enumerate) return cmd_enumerate(ea);
    if (*iso) return cmd_iso(file, file2);
    if (*witness) return cmd_witness(wn, wk, wout, jobs);
    if (*certify) return cmd_certify(exhaustive, json, cert_out, jobs);
  } catch (const lf::LoopError& e) {
    return fail(e, kUsage);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
