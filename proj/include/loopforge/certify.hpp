#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "loopforge/algebra.hpp"
#include "loopforge/canonical.hpp"
#include "loopforge/enumerate.hpp"
#include "loopforge/groups.hpp"
#include "loopforge/identities.hpp"
#include "loopforge/io.hpp"
#include "loopforge/partial_table.hpp"
#include "loopforge/powers.hpp"
#include "loopforge/search.hpp"

// Machine check that every Jordan loop of order 9 is a group.
//
// An order-9 Jordan loop either has an element generating it (cyclic case) or
// every non-identity element generates a subloop of order 3 (exponent-3
// case). Each case is settled by completing a forced partial table under the
// Jordan constraint and inspecting every completion.
namespace loopforge::order9 {

inline constexpr std::size_t kOrder = 9;

// Exponent-3 labeling: four subgroups {e, p, p^2} for p = a, b, c, d.
inline constexpr Element E = 0, A = 1, A2 = 2, B = 3, B2 = 4, C = 5, C2 = 6, D = 7, D2 = 8;
inline constexpr std::array<std::string_view, kOrder> kNames = {"e", "a", "a^2", "b", "b^2", "c", "c^2", "d", "d^2"};

/// p -> p^2 and p^2 -> p within each of the four order-3 subgroups.
constexpr Element square_of(Element p) {
  if (p == E) return E;
  return (p % 2 == 1) ? static_cast<Element>(p + 1) : static_cast<Element>(p - 1);
}

/// The unique exponent-3 table, with c = ab and d = a^2 b.
inline LoopTable exponent3_reference_table() {
  return LoopTable::from_rows({
      {0, 1, 2, 3, 4, 5, 6, 7, 8},
      {1, 2, 0, 5, 8, 7, 4, 3, 6},
      {2, 0, 1, 7, 6, 3, 8, 5, 4},
      {3, 5, 7, 4, 0, 8, 2, 6, 1},
      {4, 8, 6, 0, 3, 1, 7, 2, 5},
      {5, 7, 3, 8, 1, 6, 0, 4, 2},
      {6, 4, 8, 2, 7, 0, 5, 1, 3},
      {7, 3, 5, 6, 2, 4, 1, 8, 0},
      {8, 6, 4, 1, 5, 2, 3, 0, 7},
  });
}

/// Partial table of a cyclic order-9 loop <x> in the labeling k <-> x^k, as it
/// appears in the literature: used as a fixture for the derived skeleton.
inline constexpr std::string_view kCyclicSkeletonFixture =
    "9\n"
    "0 1 2 3 4 5 6 7 8\n"
    "1 2 3 4 5 6 7 8 0\n"
    "2 3 4 5 6 7 8 0 1\n"
    "3 4 5 . 7 . . . .\n"
    "4 5 6 7 8 0 1 2 3\n"
    "5 6 7 . 0 . . . 4\n"
    "6 7 8 . 1 . . . 5\n"
    "7 8 0 . 2 . . . .\n"
    "8 0 1 . 3 4 5 . 7\n";

inline std::string element_name(Element x) { return std::string(kNames[x]); }

// ---------------------------------------------------------------------------
// Constraint sets

inline Constraints jordan_constraints() {
  Constraints c;
  c.commutative = true;
  c.jordan = true;
  c.odd_diagonal = true;
  return c;
}

inline Constraints latin_commutative() {
  Constraints c;
  c.commutative = true;
  return c;
}

inline Constraints exponent3_constraints(bool with_jordan = true) {
  Constraints c;
  c.commutative = true;
  c.jordan = with_jordan;
  c.exponent3 = true;
  c.odd_diagonal = true;
  return c;
}

// ---------------------------------------------------------------------------
// Cyclic case

struct SkeletonCell {
  Element row, col, value;
  std::string rule;
};

struct CyclicSkeleton {
  PartialTable table{kOrder};
  std::vector<SkeletonCell> cells;  // upper triangle, with the rule that produced each
};

/// The cells of x^i * x^j (0 <= i, j <= 8) fixed by the identity, the
/// definition x * x^j = x^{j+1}, and the identities x^n x^2 = x^{n+2},
/// x^n x^4 = x^{n+4}, and x^n x^8 = x^{n+8} for n != 3 mod 4, with
/// exponents reduced mod 9 (x^9 = e) and mirrored by commutativity.
inline CyclicSkeleton cyclic_power_skeleton() {
  CyclicSkeleton s;
  auto put = [&](std::size_t i, std::size_t j, std::size_t exponent, const std::string& rule) {
    const auto r = static_cast<Element>(std::min(i, j));
    const auto c = static_cast<Element>(std::max(i, j));
    const auto v = static_cast<Element>(exponent % kOrder);
    if (s.table.filled(r, c)) {
      if (*s.table.value(r, c) != v) throw LoopError(ErrorKind::CertificationFailed, "skeleton rules disagree");
      return;
    }
    if (!s.table.place(r, c, v) || !s.table.place(c, r, v)) {
      throw LoopError(ErrorKind::CertificationFailed, "skeleton is not a partial Latin square");
    }
    s.cells.push_back({r, c, v, rule});
  };
  for (std::size_t j = 0; j < kOrder; ++j) put(0, j, j, "identity");
  for (std::size_t j = 0; j < kOrder; ++j) put(1, j, j + 1, "x x^n = x^{n+1}");
  for (std::size_t n = 0; n < kOrder; ++n) put(n, 2, n + 2, "x^n x^2 = x^{n+2}");
  for (std::size_t n = 0; n < kOrder; ++n) put(n, 4, n + 4, "x^n x^4 = x^{n+4}");
  for (std::size_t n = 0; n < kOrder; ++n) {
    if (n % 4 != 3) put(n, 8, n + 8, "x^n x^8 = x^{n+8}, n != 3 mod 4");
  }
  return s;
}

struct CellDiff {
  Element row, col;
  std::optional<Element> derived, fixture;
};

inline std::vector<CellDiff> diff_partials(const PartialTable& derived, const PartialTable& fixture) {
  std::vector<CellDiff> out;
  for (std::size_t r = 0; r < kOrder; ++r) {
    for (std::size_t c = 0; c < kOrder; ++c) {
      const auto a = derived.value(static_cast<Element>(r), static_cast<Element>(c));
      const auto b = fixture.value(static_cast<Element>(r), static_cast<Element>(c));
      if (a != b) out.push_back({static_cast<Element>(r), static_cast<Element>(c), a, b});
    }
  }
  return out;
}

/// Values admissible at (r, c) before any search: absent from the row, the
/// column, and (odd order) the main diagonal.
inline std::vector<Element> unblocked_values(const PartialTable& p, Element r, Element c) {
  Mask blocked = 0;
  for (std::size_t k = 0; k < p.order(); ++k) {
    const auto kk = static_cast<Element>(k);
    if (auto v = p.value(r, kk)) blocked |= bit(*v);
    if (auto v = p.value(kk, c)) blocked |= bit(*v);
    if (auto v = p.value(kk, kk)) blocked |= bit(*v);
  }
  std::vector<Element> out;
  for (std::size_t v = 0; v < p.order(); ++v) {
    if (!(blocked & bit(v))) out.push_back(static_cast<Element>(v));
  }
  return out;
}

struct CyclicBranch {
  Element cube_square = 0;  // value of x^3 x^3
  std::size_t completions = 0;
  std::size_t associative = 0;
  std::size_t isomorphic_to_z9 = 0;
  bool powers_consistent = true;  // x^9 = e, x^n = x^{n mod 9}, x^k well-defined for k <= 8
  bool revalidated = true;        // every completion passes the full-table predicates
};

struct CyclicCaseResult {
  std::vector<SkeletonCell> skeleton;
  std::vector<CellDiff> fixture_diff;
  std::vector<Element> candidates;
  std::vector<CyclicBranch> branches;
  bool verified = false;
};

inline CyclicBranch complete_cyclic_branch(const PartialTable& skeleton, Element value, const Constraints& cons) {
  CyclicBranch b;
  b.cube_square = value;
  PartialTable p = skeleton;
  const Element x3 = 3;
  if (!p.place(x3, x3, value)) return b;
  const auto z9 = canonical_form(cyclic_group(kOrder));
  for (const auto& q : complete_partial(p, cons)) {
    ++b.completions;
    const auto diag = diagonal_stats(q);
    const bool squaring_bijective = std::all_of(diag.begin(), diag.end(), [](std::size_t k) { return k == 1; });
    b.revalidated = b.revalidated && is_jordan(q) && squaring_bijective;
    if (is_associative(q)) ++b.associative;
    if (canonical_form(q) == z9) ++b.isomorphic_to_z9;
    const Element x = 1;
    bool ok = rpow(q, x, 9) == kIdentity;
    for (std::int64_t n = 0; n <= 40; ++n) ok = ok && rpow(q, x, n) == rpow(q, x, n % 9);
    const auto prof = power_profile(q, x, 8);
    for (int k = 1; k <= 8; ++k) ok = ok && prof.well_defined[k];
    b.powers_consistent = b.powers_consistent && ok;
  }
  return b;
}

/// Derives the cyclic skeleton, branches on x^3 x^3 over the values left open
/// by rows, columns and the diagonal, and completes each branch under the
/// Jordan constraint. Verified when x^3 x^3 = x has no completion and every
/// completion of x^3 x^3 = x^6 is Z9.
inline CyclicCaseResult certify_cyclic_case(const Constraints& cons = jordan_constraints()) {
  CyclicCaseResult r;
  const auto s = cyclic_power_skeleton();
  r.skeleton = s.cells;
  r.fixture_diff = diff_partials(s.table, parse_partial(kCyclicSkeletonFixture));
  r.candidates = unblocked_values(s.table, 3, 3);
  for (const Element v : r.candidates) r.branches.push_back(complete_cyclic_branch(s.table, v, cons));

  bool ok = r.fixture_diff.empty() && r.candidates == std::vector<Element>{1, 6};
  for (const auto& b : r.branches) {
    ok = ok && b.revalidated;
    if (b.cube_square == 1) ok = ok && b.completions == 0;
    if (b.cube_square == 6) {
      ok = ok && b.completions > 0 && b.associative == b.completions && b.isomorphic_to_z9 == b.completions &&
           b.powers_consistent;
    }
  }
  r.verified = ok;
  return r;
}

// ---------------------------------------------------------------------------
// Exponent-3 case

/// Identity row and column plus the four diagonal blocks {p, p^2} x {p, p^2}.
inline PartialTable exponent3_skeleton() {
  PartialTable p = PartialTable::loop_skeleton(kOrder);
  for (Element x = A; x <= D; x += 2) {
    const Element x2 = square_of(x);
    p.place(x, x, x2);
    p.place(x, x2, E);
    p.place(x2, x, E);
    p.place(x2, x2, x);
  }
  return p;
}

/// Places v at (r, c) and (c, r). False if that breaks the Latin property.
inline bool place_sym(PartialTable& p, Element r, Element c, Element v) {
  return p.place(r, c, v) && p.place(c, r, v);
}

/// Sets the block rows {p, p^2} x columns {q, q^2} to [[tl, tr], [bl, br]].
inline bool place_block(PartialTable& t, Element p, Element q, std::array<Element, 4> vals) {
  const Element p2 = square_of(p), q2 = square_of(q);
  return place_sym(t, p, q, vals[0]) && place_sym(t, p, q2, vals[1]) && place_sym(t, p2, q, vals[2]) &&
         place_sym(t, p2, q2, vals[3]);
}

struct CountedSeed {
  std::string label;
  bool seed_consistent = false;  // the seed itself is a partial Latin square
  std::size_t completions = 0;
};

struct Exponent3Result {
  std::size_t completions = 0;
  std::size_t iso_classes = 0;
  bool unique_class_is_z3xz3 = false;
  bool reference_table_found = false;
  bool all_associative = true;
  bool revalidated = true;

  // (a) an off-diagonal 2x2 block with a repeated element is impossible
  std::vector<CountedSeed> repeated_block_seeds;
  bool no_repeated_blocks = false;

  // (b) a block holding an element and its square in one row or column is impossible
  std::vector<Element> cross_value_candidates;  // admissible y = c b^2 = c^2 b
  std::array<Element, 4> jordan_link{};          // cells (r1, c1) and (r2, c2) tied by x = b, y = a
  std::vector<CountedSeed> square_in_line_seeds;
  bool no_square_in_line = false;

  // (c) the remaining block shape forces x = b and y = a
  std::map<std::pair<Element, Element>, std::size_t> latin_completions_by_xy;
  std::map<std::pair<Element, Element>, std::size_t> jordan_completions_by_xy;
  bool forced_x_b_y_a = false;

  bool verified = false;
};

/// Table (B) shape: block a, b with a b = a^2 b^2 = v.
inline PartialTable repeated_block_seed(Element p, Element q, Element v, bool anti_diagonal, bool& consistent) {
  PartialTable t = exponent3_skeleton();
  const Element p2 = square_of(p), q2 = square_of(q);
  consistent = anti_diagonal ? (place_sym(t, p, q2, v) && place_sym(t, p2, q, v))
                             : (place_sym(t, p, q, v) && place_sym(t, p2, q2, v));
  return t;
}

/// Block a x b = [[c, c^2], [d, d^2]]: a row holding c and c^2.
inline PartialTable square_in_row_seed() {
  PartialTable t = exponent3_skeleton();
  place_block(t, A, B, {C, C2, D, D2});
  return t;
}

/// Block a x b = [[c, d^2], [d, c^2]] with x := d a and y := d^2 b filled in.
inline PartialTable block_form_seed(Element x, Element y, bool& consistent) {
  PartialTable t = exponent3_skeleton();
  const Element x2 = square_of(x), y2 = square_of(y);
  consistent = place_block(t, A, B, {C, D2, D, C2}) && place_sym(t, A, D, x) && place_sym(t, A, C2, x2) &&
               place_sym(t, A2, C, x) && place_sym(t, A2, D2, x2) && place_sym(t, B, C2, y2) &&
               place_sym(t, B, D2, y) && place_sym(t, B2, C, y) && place_sym(t, B2, D, y2);
  return t;
}

inline bool block_has_repeat(const LoopTable& q, Element p, Element r) {
  const Element p2 = square_of(p), r2 = square_of(r);
  const std::array<Element, 4> v = {q.mul(p, r), q.mul(p, r2), q.mul(p2, r), q.mul(p2, r2)};
  return std::set<Element>(v.begin(), v.end()).size() != 4;
}

inline bool block_has_square_in_line(const LoopTable& q, Element p, Element r) {
  const Element p2 = square_of(p), r2 = square_of(r);
  const Element tl = q.mul(p, r), tr = q.mul(p, r2), bl = q.mul(p2, r), br = q.mul(p2, r2);
  auto sq = [](Element z) { return square_of(z); };
  return sq(tl) == tr || sq(tr) == tl || sq(bl) == br || sq(br) == bl || sq(tl) == bl || sq(bl) == tl ||
         sq(tr) == br || sq(br) == tr;
}

inline std::size_t count_completions(const PartialTable& seed, const Constraints& cons) {
  return complete_partial(seed, cons).size();
}

/// The full exponent-3 run plus the three exclusions that pin the table down.
/// with_jordan = false is a mutation hook: without the Jordan constraint the
/// case must stop verifying.
inline Exponent3Result certify_exponent3_case(bool with_jordan = true) {
  Exponent3Result r;
  const Constraints full = exponent3_constraints(with_jordan);

  // Full completion of the four-subgroup skeleton.
  const auto completions = complete_partial(exponent3_skeleton(), full);
  r.completions = completions.size();
  std::set<CanonicalForm> classes;
  const auto reference = exponent3_reference_table();
  for (const auto& q : completions) {
    classes.insert(canonical_form(q));
    r.all_associative = r.all_associative && is_associative(q);
    r.revalidated = r.revalidated && is_commutative(q) && is_exponent3(q) && (!with_jordan || is_jordan(q));
    r.reference_table_found = r.reference_table_found || q == reference;
  }
  r.iso_classes = classes.size();
  const auto z3xz3 = canonical_form(direct_product(cyclic_group(3), cyclic_group(3)));
  r.unique_class_is_z3xz3 = classes.size() == 1 && *classes.begin() == z3xz3;

  // (a) Every block, both diagonals of the block, every repeated value:
  // no Latin commutative completion.
  bool seeds_empty = true;
  for (Element p = A; p <= D; p += 2) {
    for (Element q = static_cast<Element>(p + 2); q <= D; q += 2) {
      for (const bool anti : {false, true}) {
        for (Element v = 0; v < kOrder; ++v) {
          CountedSeed s;
          s.label = element_name(p) + "x" + element_name(q) + (anti ? " anti-diagonal " : " diagonal ") + element_name(v);
          const auto seed = repeated_block_seed(p, q, v, anti, s.seed_consistent);
          if (s.seed_consistent) s.completions = count_completions(seed, latin_commutative());
          seeds_empty = seeds_empty && s.completions == 0;
          r.repeated_block_seeds.push_back(std::move(s));
        }
      }
    }
  }
  bool none_repeat = true;
  for (const auto& q : completions) {
    for (Element p = A; p <= D; p += 2) {
      for (Element s = A; s <= D; s += 2) {
        if (p != s) none_repeat = none_repeat && !block_has_repeat(q, p, s);
      }
    }
  }
  r.no_repeated_blocks = seeds_empty && none_repeat;

  // (b) Block a x b = [[c, c^2], [d, d^2]].
  {
    const PartialTable seed = square_in_row_seed();
    // y := c b^2 and c^2 b; the Jordan instance x = b, y = a ties the two cells
    // since b^2 (ab) = (b^2 a) b with ab = c and b^2 a = c^2.
    const Element s = *seed.value(B, B);
    const Element u = *seed.value(A, B);
    const Element v = *seed.value(s, A);
    r.jordan_link = {s, u, v, B};

    Engine latin(latin_commutative());
    PartialTable probe = seed;
    Mask open = 0;
    if (latin.initialize(probe)) open = probe.domain(C, B2) & probe.domain(C2, B);
    for_each_bit(open, [&](Element y) { r.cross_value_candidates.push_back(y); });

    CountedSeed jordan_seed{"a x b = [c c^2; d d^2] under Jordan", true, count_completions(seed, full)};
    r.square_in_line_seeds.push_back(jordan_seed);
    bool empty = jordan_seed.completions == 0;
    for (const Element y : r.cross_value_candidates) {
      PartialTable t = seed;
      CountedSeed cs;
      cs.label = "y = " + element_name(y);
      cs.seed_consistent = place_sym(t, C, B2, y) && place_sym(t, C2, B, y);
      if (cs.seed_consistent) cs.completions = count_completions(t, latin_commutative());
      empty = empty && cs.completions == 0;
      r.square_in_line_seeds.push_back(std::move(cs));
    }
    bool none_in_line = true;
    for (const auto& q : completions) {
      for (Element p = A; p <= D; p += 2) {
        for (Element t = A; t <= D; t += 2) {
          if (p != t) none_in_line = none_in_line && !block_has_square_in_line(q, p, t);
        }
      }
    }
    const bool link_ok = r.jordan_link == std::array<Element, 4>{B2, C, C2, B};
    const bool y_ok = r.cross_value_candidates == std::vector<Element>{A, A2};
    r.no_square_in_line = empty && none_in_line && link_ok && y_ok;
  }

  // (c) Block a x b = [[c, d^2], [d, c^2]] with x := d a, y := d^2 b.
  {
    bool ok = true;
    for (Element x = 1; x < kOrder; ++x) {
      for (Element y = 1; y < kOrder; ++y) {
        bool consistent = false;
        const auto seed = block_form_seed(x, y, consistent);
        if (!consistent) continue;
        const auto latin = complete_partial(seed, latin_commutative());
        if (!latin.empty()) r.latin_completions_by_xy[{x, y}] = latin.size();
        const auto jordan = complete_partial(seed, full);
        if (!jordan.empty()) r.jordan_completions_by_xy[{x, y}] = jordan.size();
        if (x == B && y == A) ok = ok && jordan.size() == 1 && jordan.front() == reference;
      }
    }
    for (const auto& [xy, count] : r.latin_completions_by_xy) {
      const bool in_range = (xy.first == B || xy.first == B2) && (xy.second == A || xy.second == A2);
      ok = ok && in_range && count == 1;
    }
    ok = ok && r.jordan_completions_by_xy.size() == 1 && r.jordan_completions_by_xy.begin()->first == std::pair{B, A};
    r.forced_x_b_y_a = ok;
  }

  r.verified = r.completions > 0 && r.unique_class_is_z3xz3 && r.all_associative && r.revalidated &&
               r.reference_table_found && r.no_repeated_blocks && r.no_square_in_line && r.forced_x_b_y_a;
  return r;
}

// ---------------------------------------------------------------------------
// Case split

struct LoopClassification {
  CanonicalForm form;
  std::vector<std::size_t> subloop_sizes;  // |<x>| for each x
  bool cyclic = false;
  bool exponent3 = false;
};

struct CaseSplitResult {
  std::size_t half_order = 0;                 // floor(9/2)
  std::vector<std::size_t> admissible_sizes;  // sizes of a proper <x>, x != e
  std::vector<LoopClassification> corpus;
  bool verified = false;
};

/// Proper monogenic subloops of an order-9 commutative loop have at most
/// floor(9/2) = 4 elements, odd order, and at least two elements, which
/// leaves 3. On each corpus loop checks that every <x> has size 3 or 9.
inline CaseSplitResult certify_case_split(const std::vector<LoopTable>& corpus) {
  CaseSplitResult r;
  r.half_order = kOrder / 2;
  for (std::size_t k = 2; k <= r.half_order; ++k) {
    if (k % 2 == 1) r.admissible_sizes.push_back(k);
  }
  bool ok = r.admissible_sizes == std::vector<std::size_t>{3};
  for (const auto& q : corpus) {
    LoopClassification c;
    c.form = canonical_form(q);
    bool sizes_ok = q.order() == kOrder;
    for (std::size_t x = 0; x < q.order(); ++x) {
      const std::size_t k = monogenic_subloop(q, static_cast<Element>(x)).size();
      c.subloop_sizes.push_back(k);
      if (x == 0) continue;
      c.cyclic = c.cyclic || k == q.order();
      sizes_ok = sizes_ok && (k == q.order() ||
                              std::find(r.admissible_sizes.begin(), r.admissible_sizes.end(), k) != r.admissible_sizes.end());
    }
    c.exponent3 = is_exponent3(q);
    ok = ok && sizes_ok && (c.cyclic || c.exponent3);
    r.corpus.push_back(std::move(c));
  }
  r.verified = ok;
  return r;
}

// ---------------------------------------------------------------------------
// Supporting statements over smaller Jordan loops

struct DependencySummary {
  IdentityId id;
  std::size_t pass = 0, fail = 0, not_applicable = 0;
};

struct DependencyResult {
  std::size_t max_order = 0;
  std::vector<std::size_t> loops_per_order;  // index = order
  std::vector<DependencySummary> summaries;
  bool verified = false;
};

/// Runs the involution, subloop and monogenic statements over every Jordan
/// loop (up to isomorphism) of order 2..max_order.
inline DependencyResult certify_dependencies(std::size_t max_order, std::size_t workers) {
  DependencyResult r;
  r.max_order = max_order;
  r.loops_per_order.assign(max_order + 1, 0);
  std::map<IdentityId, DependencySummary> acc;
  for (const auto id : {IdentityId::InvolutionParity, IdentityId::EvenSubloopParity, IdentityId::SquareRootParity,
                        IdentityId::SubloopHalfBound, IdentityId::MonogenicCyclic}) {
    acc[id] = DependencySummary{id};
  }
  for (std::size_t n = 2; n <= max_order; ++n) {
    SearchConfig cfg = SearchConfig::jordan(n);
    cfg.worker_count = workers;
    const auto loops = enumerate_loops(cfg);
    r.loops_per_order[n] = loops.tables.size();
    for (const auto& q : loops.tables) {
      auto reports = check_structure(q);
      for (std::size_t x = 0; x < n; ++x) reports.push_back(check_monogenic_lemma(q, static_cast<Element>(x)));
      for (const auto& rep : reports) {
        auto& s = acc[rep.id];
        if (rep.status == Status::Pass) ++s.pass;
        if (rep.status == Status::Fail) ++s.fail;
        if (rep.status == Status::NotApplicable) ++s.not_applicable;
      }
    }
  }
  bool ok = true;
  for (const auto& [id, s] : acc) {
    ok = ok && s.fail == 0;
    r.summaries.push_back(s);
  }
  r.verified = ok;
  return r;
}

// ---------------------------------------------------------------------------
// Certificate

struct ExhaustiveResult {
  std::vector<CanonicalForm> classes;
  bool matches_groups = false;  // exactly {Z9, Z3 x Z3}
  bool all_associative = false;
  std::uint64_t nodes = 0;
};

struct Certificate {
  DependencyResult dependencies;
  CaseSplitResult case_split;
  CyclicCaseResult cyclic_case;
  Exponent3Result exponent3_case;
  std::optional<ExhaustiveResult> exhaustive;
  std::vector<std::string> failed_stages;
  bool conclusion = false;

  /// Throws CertificationFailed naming the first failed stage.
  void require_conclusion() const {
    if (!conclusion) {
      throw LoopError(ErrorKind::CertificationFailed,
                      "stage " + (failed_stages.empty() ? std::string("unknown") : failed_stages.front()));
    }
  }
};

struct CertifyOptions {
  bool exhaustive = false;
  std::size_t corpus_max_order = 8;
  std::size_t workers = 1;
  /// Mutation hook: drop the Jordan constraint from the exponent-3 stage.
  bool exponent3_with_jordan = true;
};

inline ExhaustiveResult exhaustive_order9(std::size_t workers) {
  SearchConfig cfg = SearchConfig::jordan(kOrder);
  cfg.worker_count = workers;
  const auto e = enumerate_loops(cfg);
  ExhaustiveResult r;
  r.nodes = e.stats.nodes_expanded;
  r.all_associative = true;
  for (const auto& q : e.tables) {
    r.classes.push_back(canonical_form(q));
    r.all_associative = r.all_associative && is_associative(q);
  }
  std::vector<CanonicalForm> expected = {canonical_form(cyclic_group(9)),
                                         canonical_form(direct_product(cyclic_group(3), cyclic_group(3)))};
  std::sort(expected.begin(), expected.end());
  std::vector<CanonicalForm> got = r.classes;
  std::sort(got.begin(), got.end());
  r.matches_groups = got == expected;
  return r;
}

inline Certificate certify_order9(const CertifyOptions& opt = {}) {
  Certificate cert;
  cert.dependencies = certify_dependencies(opt.corpus_max_order, opt.workers);
  if (!cert.dependencies.verified) cert.failed_stages.push_back("dependencies");

  cert.cyclic_case = certify_cyclic_case();
  if (!cert.cyclic_case.verified) cert.failed_stages.push_back("cyclic-case");

  cert.exponent3_case = certify_exponent3_case(opt.exponent3_with_jordan);
  if (!cert.exponent3_case.verified) cert.failed_stages.push_back("exponent3-case");

  std::vector<LoopTable> corpus = {cyclic_group(kOrder), direct_product(cyclic_group(3), cyclic_group(3))};
  if (opt.exhaustive) {
    cert.exhaustive = exhaustive_order9(opt.workers);
    if (!cert.exhaustive->matches_groups || !cert.exhaustive->all_associative) cert.failed_stages.push_back("exhaustive");
    corpus.clear();
    for (const auto& f : cert.exhaustive->classes) corpus.push_back(f.table());
  }
  cert.case_split = certify_case_split(corpus);
  if (!cert.case_split.verified) cert.failed_stages.push_back("case-split");

  cert.conclusion = cert.failed_stages.empty();
  return cert;
}

// ---------------------------------------------------------------------------
// Rendering

inline std::string yes_no(bool b) { return b ? "yes" : "no"; }

inline std::string format_certificate(const Certificate& c) {
  std::string out;
  auto line = [&](const std::string& s) { out += s + "\n"; };
  line("Jordan loops of order 9");
  line("");
  line("[dependencies] Jordan loops of order 2.." + std::to_string(c.dependencies.max_order) + ":");
  {
    std::string counts = "  loops per order:";
    for (std::size_t n = 2; n < c.dependencies.loops_per_order.size(); ++n) {
      counts += " " + std::to_string(n) + ":" + std::to_string(c.dependencies.loops_per_order[n]);
    }
    line(counts);
  }
  for (const auto& s : c.dependencies.summaries) {
    line("  " + std::string(to_string(s.id)) + ": pass " + std::to_string(s.pass) + ", fail " + std::to_string(s.fail) +
         ", not-applicable " + std::to_string(s.not_applicable));
  }
  line("  verified: " + yes_no(c.dependencies.verified));
  line("");
  line("[case-split] floor(9/2) = " + std::to_string(c.case_split.half_order) + "; admissible proper <x> sizes:");
  {
    std::string sizes = " ";
    for (const auto k : c.case_split.admissible_sizes) sizes += " " + std::to_string(k);
    line(sizes);
  }
  for (const auto& l : c.case_split.corpus) {
    std::string sizes;
    for (const auto k : l.subloop_sizes) sizes += (sizes.empty() ? "" : ",") + std::to_string(k);
    line("  loop " + l.form.hash_hex() + ": |<x>| = " + sizes + (l.cyclic ? " (cyclic)" : "") +
         (l.exponent3 ? " (exponent 3)" : ""));
  }
  line("  verified: " + yes_no(c.case_split.verified));
  line("");
  const auto& cy = c.cyclic_case;
  line("[cyclic-case] skeleton cells derived: " + std::to_string(cy.skeleton.size()) +
       ", differences from fixture: " + std::to_string(cy.fixture_diff.size()));
  {
    std::string cand;
    for (const auto v : cy.candidates) cand += (cand.empty() ? "" : ", ") + std::string("x^") + std::to_string(v);
    line("  x^3 x^3 candidates: " + cand);
  }
  for (const auto& b : cy.branches) {
    line("  x^3 x^3 = x^" + std::to_string(b.cube_square) + ": " + std::to_string(b.completions) +
         " Jordan completions, " + std::to_string(b.associative) + " associative, " +
         std::to_string(b.isomorphic_to_z9) + " isomorphic to Z9");
  }
  line("  verified: " + yes_no(cy.verified));
  line("");
  const auto& ex = c.exponent3_case;
  line("[exponent3-case] completions: " + std::to_string(ex.completions) + ", isomorphism classes: " +
       std::to_string(ex.iso_classes) + ", class is Z3 x Z3: " + yes_no(ex.unique_class_is_z3xz3));
  line("  repeated element in an off-diagonal block excluded: " + yes_no(ex.no_repeated_blocks) + " (" +
       std::to_string(ex.repeated_block_seeds.size()) + " seeds)");
  {
    std::string ys;
    for (const auto y : ex.cross_value_candidates) ys += (ys.empty() ? "" : ", ") + element_name(y);
    line("  element and its square in one line excluded: " + yes_no(ex.no_square_in_line) + " (y in {" + ys + "})");
  }
  line("  block form forces x = b, y = a: " + yes_no(ex.forced_x_b_y_a));
  line("  verified: " + yes_no(ex.verified));
  if (c.exhaustive) {
    line("");
    line("[exhaustive] isomorphism classes: " + std::to_string(c.exhaustive->classes.size()) +
         ", exactly Z9 and Z3 x Z3: " + yes_no(c.exhaustive->matches_groups) +
         ", all associative: " + yes_no(c.exhaustive->all_associative));
  }
  line("");
  if (c.conclusion) {
    line("conclusion: every Jordan loop of order 9 is a group");
  } else {
    std::string failed;
    for (const auto& s : c.failed_stages) failed += (failed.empty() ? "" : ", ") + s;
    line("conclusion: NOT established (failed: " + failed + ")");
  }
  return out;
}

inline nlohmann::json certificate_to_json(const Certificate& c) {
  using nlohmann::json;
  json deps = json::array();
  for (const auto& s : c.dependencies.summaries) {
    deps.push_back({{"id", std::string(to_string(s.id))}, {"pass", s.pass}, {"fail", s.fail}, {"not_applicable", s.not_applicable}});
  }
  json corpus = json::array();
  for (const auto& l : c.case_split.corpus) {
    corpus.push_back({{"hash", l.form.hash_hex()}, {"subloop_sizes", l.subloop_sizes}, {"cyclic", l.cyclic}, {"exponent3", l.exponent3}});
  }
  json branches = json::array();
  for (const auto& b : c.cyclic_case.branches) {
    branches.push_back({{"cube_square", b.cube_square},
                        {"completions", b.completions},
                        {"associative", b.associative},
                        {"isomorphic_to_z9", b.isomorphic_to_z9},
                        {"powers_consistent", b.powers_consistent}});
  }
  json skeleton = json::array();
  for (const auto& s : c.cyclic_case.skeleton) {
    skeleton.push_back({{"row", s.row}, {"col", s.col}, {"value", s.value}, {"rule", s.rule}});
  }
  json latin_xy = json::array();
  for (const auto& [xy, n] : c.exponent3_case.latin_completions_by_xy) {
    latin_xy.push_back({{"x", element_name(xy.first)}, {"y", element_name(xy.second)}, {"completions", n}});
  }
  json jordan_xy = json::array();
  for (const auto& [xy, n] : c.exponent3_case.jordan_completions_by_xy) {
    jordan_xy.push_back({{"x", element_name(xy.first)}, {"y", element_name(xy.second)}, {"completions", n}});
  }
  json ys = json::array();
  for (const auto y : c.exponent3_case.cross_value_candidates) ys.push_back(element_name(y));
  json j = {
      {"schema", 1},
      {"conclusion", c.conclusion},
      {"failed_stages", c.failed_stages},
      {"dependencies",
       {{"max_order", c.dependencies.max_order},
        {"loops_per_order", c.dependencies.loops_per_order},
        {"summaries", deps},
        {"verified", c.dependencies.verified}}},
      {"case_split",
       {{"half_order", c.case_split.half_order},
        {"admissible_sizes", c.case_split.admissible_sizes},
        {"corpus", corpus},
        {"verified", c.case_split.verified}}},
      {"cyclic_case",
       {{"skeleton", skeleton},
        {"fixture_differences", c.cyclic_case.fixture_diff.size()},
        {"candidates", c.cyclic_case.candidates},
        {"branches", branches},
        {"verified", c.cyclic_case.verified}}},
      {"exponent3_case",
       {{"completions", c.exponent3_case.completions},
        {"iso_classes", c.exponent3_case.iso_classes},
        {"unique_class_is_z3xz3", c.exponent3_case.unique_class_is_z3xz3},
        {"reference_table_found", c.exponent3_case.reference_table_found},
        {"no_repeated_blocks", c.exponent3_case.no_repeated_blocks},
        {"cross_value_candidates", ys},
        {"no_square_in_line", c.exponent3_case.no_square_in_line},
        {"latin_completions_by_xy", latin_xy},
        {"jordan_completions_by_xy", jordan_xy},
        {"forced_x_b_y_a", c.exponent3_case.forced_x_b_y_a},
        {"verified", c.exponent3_case.verified}}},
  };
  if (c.exhaustive) {
    json classes = json::array();
    for (const auto& f : c.exhaustive->classes) classes.push_back(f.hash_hex());
    j["exhaustive"] = {{"classes", classes},
                       {"matches_groups", c.exhaustive->matches_groups},
                       {"all_associative", c.exhaustive->all_associative}};
  }
  return j;
}

}  // namespace loopforge::order9
