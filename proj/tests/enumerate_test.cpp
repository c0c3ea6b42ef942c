#include <gtest/gtest.h>

#include <filesystem>

#include "support.hpp"

using namespace loopforge;
using lftest::Grid;

namespace {

enum class Kind { Loops, Commutative, Jordan };

SearchConfig config(Kind k, std::size_t n) {
  switch (k) {
    case Kind::Loops: return SearchConfig::loops(n);
    case Kind::Commutative: return SearchConfig::commutative(n);
    case Kind::Jordan: return SearchConfig::jordan(n);
  }
  return SearchConfig::loops(n);
}

bool keep(Kind k, const Grid& g) {
  if (k == Kind::Commutative) return lftest::commutative(g);
  if (k == Kind::Jordan) return lftest::jordan(g);
  return true;
}

std::set<std::vector<int>> oracle_classes(const std::vector<Grid>& all, Kind k) {
  std::set<std::vector<int>> out;
  for (const auto& g : all) {
    if (keep(k, g)) out.insert(lftest::brute_canonical(g));
  }
  return out;
}

std::set<std::vector<int>> engine_classes(const SearchConfig& cfg) {
  std::set<std::vector<int>> out;
  for (const auto& q : enumerate_loops(cfg).tables) out.insert(lftest::bytes_of(canonical_form(q)));
  return out;
}

std::string stream_of(const Enumeration& e) {
  std::string s;
  for (const auto& q : e.tables) s += format_table(q);
  return s;
}

}  // namespace

TEST(Enumerate, OrderThree) {
  const auto t = lftest::enumerate(SearchConfig::loops(3));
  ASSERT_EQ(t.size(), 1u);
  EXPECT_TRUE(are_isomorphic(t[0], cyclic_group(3)));
}

TEST(Enumerate, NoNonassociativeJordanBelowSix) {
  for (std::size_t n = 1; n <= 5; ++n) {
    auto cfg = SearchConfig::jordan(n);
    cfg.nonassociative_only = true;
    EXPECT_TRUE(lftest::enumerate(cfg).empty()) << n;
  }
  auto cfg = SearchConfig::jordan(6);
  cfg.nonassociative_only = true;
  EXPECT_GE(lftest::enumerate(cfg).size(), 1u);
}

TEST(Enumerate, LabeledCountsMatchFilling) {
  for (int n = 1; n <= 4; ++n) {
    const auto all = lftest::all_loops_by_filling(n);
    auto cfg = SearchConfig::loops(n);
    cfg.up_to_iso = false;
    const auto got = lftest::enumerate(cfg);
    EXPECT_EQ(got.size(), all.size()) << n;
    std::set<Grid> a(all.begin(), all.end()), b;
    for (const auto& q : got) b.insert(lftest::grid_of(q));
    EXPECT_EQ(a, b);
  }
}

TEST(Enumerate, ClassesMatchBruteForceUpTo6) {
  for (int n = 1; n <= 6; ++n) {
    const auto all = lftest::all_loops_by_rows(n);
    for (const Kind k : {Kind::Loops, Kind::Commutative, Kind::Jordan}) {
      EXPECT_EQ(engine_classes(config(k, n)), oracle_classes(all, k)) << "n=" << n << " kind=" << int(k);
    }
  }
}

TEST(Enumerate, KnownCounts) {
  const std::vector<std::size_t> loops = {1, 1, 1, 2, 6, 109};
  const std::vector<std::size_t> comm = {1, 1, 1, 2, 1, 8, 17};
  for (std::size_t n = 1; n <= loops.size(); ++n) EXPECT_EQ(lftest::enumerate(SearchConfig::loops(n)).size(), loops[n - 1]);
  for (std::size_t n = 1; n <= comm.size(); ++n) EXPECT_EQ(lftest::enumerate(SearchConfig::commutative(n)).size(), comm[n - 1]);
}

TEST(Enumerate, JordanBaselines) {
  // Regression baselines established by this tool.
  const std::vector<std::size_t> jordan = {1, 1, 1, 2, 1, 2, 3, 22, 2};
  for (std::size_t n = 1; n <= jordan.size(); ++n) EXPECT_EQ(lftest::enumerate(SearchConfig::jordan(n)).size(), jordan[n - 1]) << n;
}

TEST(Enumerate, GenerateAndTestAgrees) {
  for (std::size_t n = 1; n <= 5; ++n) {
    for (const Kind k : {Kind::Loops, Kind::Commutative, Kind::Jordan}) {
      auto slow = config(k, n);
      slow.propagate = false;
      EXPECT_EQ(engine_classes(slow), engine_classes(config(k, n))) << n;
    }
  }
  auto slow = SearchConfig::jordan(6);
  slow.propagate = false;
  EXPECT_EQ(engine_classes(slow), engine_classes(SearchConfig::jordan(6)));
}

TEST(Enumerate, PruningFlagsDoNotChangeClasses) {
  for (std::size_t n : {5, 7}) {
    auto plain = SearchConfig::commutative(n);
    plain.require_identity_diag_odd = false;
    plain.symmetry_breaking = false;
    EXPECT_EQ(engine_classes(plain), engine_classes(SearchConfig::commutative(n)));
    auto jplain = SearchConfig::jordan(n);
    jplain.require_identity_diag_odd = false;
    EXPECT_EQ(engine_classes(jplain), engine_classes(SearchConfig::jordan(n)));
  }
}

TEST(Enumerate, EmittedTablesSatisfyConfig) {
  for (std::size_t n = 2; n <= 8; ++n) {
    for (const auto& q : lftest::enumerate(SearchConfig::jordan(n))) {
      EXPECT_TRUE(is_commutative(q));
      EXPECT_TRUE(is_jordan(q));
    }
  }
}

TEST(Enumerate, NoDuplicatesAndSorted) {
  const auto e = enumerate_loops(SearchConfig::commutative(7));
  std::vector<CanonicalForm> forms;
  for (const auto& q : e.tables) forms.push_back(canonical_form(q));
  for (std::size_t i = 1; i < forms.size(); ++i) EXPECT_LT(forms[i - 1], forms[i]);
  EXPECT_GE(e.stats.tables_emitted, e.stats.iso_classes);
  EXPECT_EQ(e.stats.iso_classes, e.tables.size());
}

TEST(Enumerate, DeterministicAcrossRunsAndWorkers) {
  auto cfg = SearchConfig::jordan(8);
  const auto one = enumerate_loops(cfg);
  const auto again = enumerate_loops(cfg);
  EXPECT_EQ(stream_of(one), stream_of(again));
  EXPECT_EQ(one.stats.nodes_expanded, again.stats.nodes_expanded);
  cfg.worker_count = 4;
  EXPECT_EQ(stream_of(enumerate_loops(cfg)), stream_of(one));
  auto split = SearchConfig::commutative(7);
  split.split_rows = 2;
  split.worker_count = 3;
  EXPECT_EQ(stream_of(enumerate_loops(split)), stream_of(enumerate_loops(SearchConfig::commutative(7))));
}

TEST(Enumerate, Limit) {
  auto cfg = SearchConfig::loops(6);
  cfg.limit = 5;
  EXPECT_EQ(lftest::enumerate(cfg).size(), 5u);
  cfg.up_to_iso = false;
  EXPECT_EQ(lftest::enumerate(cfg).size(), 5u);
}

TEST(Enumerate, ConfigValidation) {
  auto bad = SearchConfig::loops(5);
  bad.require_jordan = true;
  EXPECT_THROW(enumerate_loops(bad), LoopError);
  auto even = SearchConfig::commutative(6);
  even.require_identity_diag_odd = true;
  EXPECT_THROW(enumerate_loops(even), LoopError);
  try {
    enumerate_loops(SearchConfig::jordan(11));
    FAIL();
  } catch (const LoopError& err) {
    EXPECT_EQ(err.kind(), ErrorKind::OrderTooLarge);
  }
  auto capped = SearchConfig::jordan(7);
  capped.order_cap = 6;
  EXPECT_THROW(enumerate_loops(capped), LoopError);
}

TEST(Enumerate, WritesDirectory) {
  const auto dir = std::filesystem::temp_directory_path() / "loopforge_enum_test";
  std::filesystem::remove_all(dir);
  const auto cfg = SearchConfig::jordan(7);
  const auto e = enumerate_loops(cfg);
  write_enumeration(dir, cfg, e, false, false);
  std::size_t files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".loop") {
      ++files;
      const auto q = read_table_file(entry.path().string());
      EXPECT_EQ(entry.path().stem().string(), canonical_form(q).hash_hex());
    }
  }
  EXPECT_EQ(files, e.tables.size());
  const auto stats = nlohmann::json::parse(read_text_file((dir / "stats.json").string()));
  EXPECT_EQ(stats["schema"], 1);
  EXPECT_EQ(stats["iso_classes"], e.tables.size());
  EXPECT_FALSE(stats.contains("wall_time_ms"));
  std::filesystem::remove_all(dir);
}

TEST(LeastFirstRow, MatchesBruteForce) {
  std::mt19937 rng(7);
  for (std::size_t n = 2; n <= 7; ++n) {
    for (int trial = 0; trial < 40; ++trial) {
      // a permutation with row[0] = 1, as row 1 of a loop is
      std::vector<Element> row(n);
      std::iota(row.begin(), row.end(), Element{0});
      do {
        std::shuffle(row.begin(), row.end(), rng);
      } while (row[0] != 1);
      std::vector<Element> best;
      std::vector<Element> s(n);
      std::iota(s.begin(), s.end(), Element{0});
      do {
        // conjugate by s, which fixes 0 and 1
        std::vector<Element> conj(n);
        for (std::size_t x = 0; x < n; ++x) conj[s[x]] = s[row[x]];
        if (best.empty() || conj < best) best = conj;
      } while (std::next_permutation(s.begin() + 2, s.end()));
      EXPECT_EQ(least_first_row(row), best);
    }
  }
}

TEST(Canonical, TableFIsZ3xZ3) {
  const auto f = lftest::table_f();
  const auto g = direct_product(cyclic_group(3), cyclic_group(3));
  EXPECT_EQ(canonical_form(f), canonical_form(g));
  const auto phi = isomorphism(f, g);
  ASSERT_TRUE(phi);
  EXPECT_TRUE(is_isomorphism(f, g, *phi));
  EXPECT_FALSE(are_isomorphic(cyclic_group(9), g));
}

TEST(Canonical, Trivial) {
  const auto t = parse_table("1\n0");
  EXPECT_EQ(canonical_form(t).bytes, std::vector<Element>{0});
}

TEST(Canonical, InvariantUnderRelabeling) {
  std::mt19937 rng(42);
  auto cfg = SearchConfig::jordan(6);
  cfg.nonassociative_only = true;
  const auto q6 = lftest::enumerate(cfg).front();
  const auto base = canonical_form(q6);
  for (int i = 0; i < 20; ++i) {
    const auto r = lftest::random_relabel(q6, rng);
    EXPECT_EQ(canonical_form(r), base);
    const auto phi = isomorphism(q6, r);
    ASSERT_TRUE(phi);
    EXPECT_TRUE(is_isomorphism(q6, r, *phi));
  }
  for (const auto& q : lftest::enumerate(SearchConfig::jordan(8))) {
    const auto r = lftest::random_relabel(q, rng);
    EXPECT_TRUE(are_isomorphic(q, r));
    EXPECT_EQ(canonical_form(q).table(), q);
  }
}

TEST(Canonical, MatchesBruteForceOnRandomRelabelings) {
  std::mt19937 rng(3);
  for (const auto& q : lftest::enumerate(SearchConfig::loops(6))) {
    const auto r = lftest::random_relabel(q, rng);
    EXPECT_EQ(lftest::bytes_of(canonical_form(r)), lftest::brute_canonical(lftest::grid_of(q)));
  }
}

TEST(Witness, Examples) {
  EXPECT_FALSE(find_power_witness(5, 5));
  EXPECT_FALSE(find_power_witness(6, 4));
  EXPECT_THROW(find_power_witness(6, 0), LoopError);
}

TEST(Witness, NoneAtOrderSix) {
  // Brute force over every labeled Jordan loop of order 6: x^6 is always well-defined.
  std::size_t jordan = 0;
  for (const auto& g : lftest::all_loops_by_rows(6)) {
    if (!lftest::commutative(g) || !lftest::jordan(g)) continue;
    ++jordan;
    for (int x = 0; x < 6; ++x) EXPECT_EQ(lftest::bracketings(g, x, 6).size(), 1u);
  }
  EXPECT_EQ(jordan, 66u);
  EXPECT_FALSE(find_power_witness(6, 6));
  for (std::size_t n = 7; n <= 9; ++n) EXPECT_FALSE(find_power_witness(n, 6)) << n;
}

TEST(CompletePartial, TotalTableIsItsOwnCompletion) {
  const auto f = lftest::table_f();
  Constraints c;
  c.commutative = true;
  const auto out = complete_partial(PartialTable::from_table(f), c);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0], f);
}

TEST(CompletePartial, SkeletonCompletionsAreLoops) {
  // Every completion of the bare identity skeleton at order 4, unconstrained
  const auto out = complete_partial(PartialTable::loop_skeleton(4), Constraints{});
  EXPECT_EQ(out.size(), 4u);
}
