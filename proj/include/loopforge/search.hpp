#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "loopforge/algebra.hpp"
#include "loopforge/error.hpp"
#include "loopforge/loop_table.hpp"
#include "loopforge/partial_table.hpp"

namespace loopforge {

/// Which properties completions must have. Latin and the identity row/column
/// are always required.
struct Constraints {
  bool commutative = false;
  bool jordan = false;      // x^2(yx) = (x^2 y)x; needs commutative
  bool exponent3 = false;   // x * x^2 = e
  bool odd_diagonal = false;  // squaring is a permutation (valid for odd-order commutative loops)
  /// When false the engine only rejects row/column repeats while branching and
  /// tests every other property on complete tables.
  bool propagate = true;
};

enum class Prune : int { Latin, Jordan, Exponent3, Diagonal, Symmetry };

inline constexpr std::size_t kPruneKinds = 5;

constexpr std::string_view to_string(Prune p) {
  constexpr std::array<std::string_view, kPruneKinds> names = {"latin", "jordan", "exponent3", "diagonal", "symmetry"};
  return names[static_cast<int>(p)];
}

struct EngineCounters {
  std::uint64_t nodes = 0;
  std::array<std::uint64_t, kPruneKinds> prunes{};

  void add(const EngineCounters& o) {
    nodes += o.nodes;
    for (std::size_t i = 0; i < kPruneKinds; ++i) prunes[i] += o.prunes[i];
  }
};

/// Backtracking completion of partial loop tables.
///
/// Branching fills holes row by row (upper triangle only when commutative,
/// the mirror cell follows). Each placement propagates:
///  - Latin: the value leaves its row and column; empty domains fail, singleton
///    domains and values with a single remaining place are forced;
///  - commutativity: the mirror cell gets the same value;
///  - odd diagonal: diagonal values are pairwise distinct;
///  - exponent 3: x*x = s forces x*s = e, and x*y = e forces x*x = y;
///  - Jordan: every instance x^2(yx) = (x^2 y)x that the new cell takes part in
///    is re-examined; when all but one of its five cells are known the last one
///    is forced, or the branch fails.
///
/// One engine per thread; it owns a reusable work queue.
class Engine {
 public:
  explicit Engine(Constraints c) : c_(c) {
    if (c_.jordan && !c_.commutative) throw LoopError(ErrorKind::InvalidConfig, "jordan requires commutative");
  }

  const Constraints& constraints() const noexcept { return c_; }
  const EngineCounters& counters() const noexcept { return counters_; }
  EngineCounters& counters() noexcept { return counters_; }

  /// Brings an initial state in line with the constraints. False if contradictory.
  bool initialize(PartialTable& p) {
    const std::size_t n = p.order();
    queue_.clear();
    for (std::size_t i = 0; i < n; ++i) {
      push(0, static_cast<Element>(i), static_cast<Element>(i), Prune::Latin);
      push(static_cast<Element>(i), 0, static_cast<Element>(i), Prune::Latin);
    }
    if (!c_.propagate) {
      if (!drain_plain(p)) return false;
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
          const auto v = p.value(static_cast<Element>(r), static_cast<Element>(c));
          if (v && c_.commutative && !p.place(static_cast<Element>(c), static_cast<Element>(r), *v, false)) return false;
        }
      }
      return true;
    }
    if (!drain(p)) return false;
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        const auto v = p.value(static_cast<Element>(r), static_cast<Element>(c));
        if (v && !after_place(p, static_cast<Element>(r), static_cast<Element>(c), *v)) return false;
      }
    }
    if (c_.jordan) {
      for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
          if (!jordan_instance(p, static_cast<Element>(x), static_cast<Element>(y))) return fail(Prune::Jordan);
        }
      }
    }
    return settle(p);
  }

  /// Places v at (r, c) and propagates to a fixpoint. False on contradiction.
  bool assign(PartialTable& p, Element r, Element c, Element v) {
    queue_.clear();
    if (!c_.propagate) {
      push(r, c, v, Prune::Latin);
      return drain_plain(p);
    }
    push(r, c, v, Prune::Latin);
    return settle(p);
  }

  /// Full check of a complete table against every constraint.
  bool accepts(const PartialTable& p) const {
    if (!p.complete()) return false;
    const LoopTable q = p.to_loop();
    if (c_.commutative && !is_commutative(q)) return false;
    if (c_.odd_diagonal) {
      Mask seen = 0;
      for (std::size_t x = 0; x < q.order(); ++x) seen |= bit(q.mul(static_cast<Element>(x), static_cast<Element>(x)));
      if (seen != q.all()) return false;
    }
    if (c_.exponent3 && !is_exponent3(q)) return false;
    if (c_.jordan && jordan_violation(q)) return false;
    return true;
  }

  /// Depth-first enumeration from p. A state for which at_frontier returns
  /// true, and every complete table, goes to emit (which returns false to stop
  /// the search). Returns false if stopped.
  template <typename Frontier, typename Emit>
  bool expand(PartialTable p, Frontier&& at_frontier, Emit&& emit) {
    return dfs(p, at_frontier, emit);
  }

  /// Every complete table reachable from an initialized state p.
  template <typename Emit>
  bool solve(PartialTable p, Emit&& emit) {
    auto never = [](const PartialTable&) { return false; };
    return dfs(p, never, emit);
  }

 private:
  struct Pending {
    Element r, c, v;
    Prune source;
  };

  void push(Element r, Element c, Element v, Prune src) { queue_.push_back({r, c, v, src}); }

  bool fail(Prune why) {
    ++counters_.prunes[static_cast<int>(why)];
    queue_.clear();
    return false;
  }

  std::optional<std::pair<Element, Element>> next_cell(const PartialTable& p) const {
    const std::size_t n = p.order();
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = c_.commutative ? r : 0; c < n; ++c) {
        if (!p.filled(static_cast<Element>(r), static_cast<Element>(c))) {
          return std::pair{static_cast<Element>(r), static_cast<Element>(c)};
        }
      }
    }
    return std::nullopt;
  }

  template <typename Frontier, typename Emit>
  bool dfs(PartialTable& p, Frontier& at_frontier, Emit& emit) {
    ++counters_.nodes;
    if (at_frontier(p)) return emit(p);
    const auto cell = next_cell(p);
    if (!cell) {
      if (!c_.propagate && !accepts(p)) return true;
      return emit(p);
    }
    const auto [r, c] = *cell;
    Mask candidates = p.domain(r, c);
    if (!c_.propagate) {
      candidates = 0;
      for (std::size_t v = 0; v < p.order(); ++v) {
        if (p.where_in_row(r, static_cast<Element>(v)) < 0 && p.where_in_col(c, static_cast<Element>(v)) < 0) {
          candidates |= bit(v);
        }
      }
    }
    bool keep_going = true;
    for_each_bit(candidates, [&](Element v) {
      if (!keep_going) return;
      PartialTable child = p;
      if (assign(child, r, c, v)) keep_going = dfs(child, at_frontier, emit);
    });
    return keep_going;
  }

  // Generate-and-test placement: repeats rejected, nothing inferred.
  bool drain_plain(PartialTable& p) {
    while (!queue_.empty()) {
      const Pending e = queue_.back();
      queue_.pop_back();
      if (!p.place(e.r, e.c, e.v, false)) return fail(Prune::Latin);
      if (c_.commutative && e.r != e.c && !p.place(e.c, e.r, e.v, false)) return fail(Prune::Latin);
    }
    return true;
  }

  bool drain(PartialTable& p) {
    while (!queue_.empty()) {
      const Pending e = queue_.back();
      queue_.pop_back();
      if (p.filled(e.r, e.c)) {
        if (*p.value(e.r, e.c) != e.v) return fail(e.source);
        continue;
      }
      if (!(p.domain(e.r, e.c) & bit(e.v))) return fail(e.source);
      if (!p.place(e.r, e.c, e.v)) return fail(Prune::Latin);
      if (!after_place(p, e.r, e.c, e.v)) return false;
    }
    return true;
  }

  // Drains, then looks for values with exactly one admissible place, until
  // nothing more is forced.
  bool settle(PartialTable& p) {
    for (;;) {
      if (!drain(p)) return false;
      if (!hidden_singles(p)) return false;
      if (queue_.empty()) return true;
    }
  }

  bool hidden_singles(PartialTable& p) {
    const std::size_t n = p.order();
    for (std::size_t line = 0; line < n; ++line) {
      const auto r = static_cast<Element>(line);
      for (std::size_t vi = 0; vi < n; ++vi) {
        const auto v = static_cast<Element>(vi);
        if (p.where_in_row(r, v) < 0) {
          int count = 0;
          Element at = 0;
          for (std::size_t j = 0; j < n; ++j) {
            const auto c = static_cast<Element>(j);
            if (!p.filled(r, c) && (p.domain(r, c) & bit(v))) {
              ++count;
              at = c;
            }
          }
          if (count == 0) return fail(Prune::Latin);
          if (count == 1) push(r, at, v, Prune::Latin);
        }
        if (!c_.commutative && p.where_in_col(r, v) < 0) {
          int count = 0;
          Element at = 0;
          for (std::size_t i = 0; i < n; ++i) {
            const auto rr = static_cast<Element>(i);
            if (!p.filled(rr, r) && (p.domain(rr, r) & bit(v))) {
              ++count;
              at = rr;
            }
          }
          if (count == 0) return fail(Prune::Latin);
          if (count == 1) push(at, r, v, Prune::Latin);
        }
      }
    }
    if (c_.odd_diagonal) {
      Mask placed = 0;
      for (std::size_t d = 0; d < n; ++d) {
        if (const auto v = p.value(static_cast<Element>(d), static_cast<Element>(d))) placed |= bit(*v);
      }
      for (std::size_t vi = 0; vi < n; ++vi) {
        if (placed & bit(vi)) continue;
        int count = 0;
        Element at = 0;
        for (std::size_t d = 0; d < n; ++d) {
          const auto x = static_cast<Element>(d);
          if (!p.filled(x, x) && (p.domain(x, x) & bit(vi))) {
            ++count;
            at = x;
          }
        }
        if (count == 0) return fail(Prune::Diagonal);
        if (count == 1) push(at, at, static_cast<Element>(vi), Prune::Diagonal);
      }
    }
    return true;
  }

  // Consequences of (r, c) = v, which has just been placed.
  bool after_place(PartialTable& p, Element r, Element c, Element v) {
    const std::size_t n = p.order();
    for (std::size_t j = 0; j < n; ++j) {
      const auto k = static_cast<Element>(j);
      if (!p.filled(r, k) && popcount(p.domain(r, k)) == 1) push(r, k, lowest(p.domain(r, k)), Prune::Latin);
      if (!p.filled(k, c) && popcount(p.domain(k, c)) == 1) push(k, c, lowest(p.domain(k, c)), Prune::Latin);
    }
    if (c_.commutative && r != c) push(c, r, v, Prune::Latin);
    if (c_.odd_diagonal && r == c) {
      for (std::size_t d = 0; d < n; ++d) {
        const auto x = static_cast<Element>(d);
        if (x == r || p.filled(x, x)) continue;
        if (!p.remove(x, x, v)) return fail(Prune::Diagonal);
        if (popcount(p.domain(x, x)) == 1) push(x, x, lowest(p.domain(x, x)), Prune::Diagonal);
      }
    }
    if (c_.exponent3) {
      if (r == c) push(r, v, kIdentity, Prune::Exponent3);
      if (v == kIdentity) push(r, r, c, Prune::Exponent3);
    }
    if (c_.jordan && !jordan_triggers(p, r, c)) return fail(Prune::Jordan);
    return true;
  }

  // Instances x^2(yx) = (x^2 y)x in which cell (a, b) is one of the five
  // cells: (x,x), (y,x), (x^2, yx), (x^2, y) or (x^2 y, x).
  bool jordan_triggers(const PartialTable& p, Element a, Element b) {
    const std::size_t n = p.order();
    if (a == b) {
      for (std::size_t y = 0; y < n; ++y) {
        if (!jordan_instance(p, a, static_cast<Element>(y))) return false;
      }
    }
    if (!jordan_instance(p, b, a)) return false;
    for (std::size_t xi = 0; xi < n; ++xi) {
      const auto x = static_cast<Element>(xi);
      if (p.raw(x, x) != a) continue;
      const int y = p.where_in_col(x, b);
      if (y >= 0 && !jordan_instance(p, x, static_cast<Element>(y))) return false;
      if (!jordan_instance(p, x, b)) return false;
    }
    const int s = p.raw(b, b);
    if (s >= 0) {
      const int y = p.where_in_row(static_cast<Element>(s), a);
      if (y >= 0 && !jordan_instance(p, b, static_cast<Element>(y))) return false;
    }
    return true;
  }

  bool jordan_instance(const PartialTable& p, Element x, Element y) {
    const int s = p.raw(x, x);
    if (s < 0) return true;
    const auto sq = static_cast<Element>(s);
    const int u = p.raw(y, x);
    const int v = p.raw(sq, y);
    if (u >= 0 && v >= 0) {
      const int lhs = p.raw(sq, static_cast<Element>(u));
      const int rhs = p.raw(static_cast<Element>(v), x);
      if (lhs >= 0 && rhs >= 0) return lhs == rhs;
      if (lhs >= 0) push(static_cast<Element>(v), x, static_cast<Element>(lhs), Prune::Jordan);
      if (rhs >= 0) push(sq, static_cast<Element>(u), static_cast<Element>(rhs), Prune::Jordan);
      return true;
    }
    if (u >= 0) {
      // x^2 * u is known; (x^2 y) must be the row whose x-column holds it.
      const int lhs = p.raw(sq, static_cast<Element>(u));
      if (lhs >= 0) {
        const int row = p.where_in_col(x, static_cast<Element>(lhs));
        if (row >= 0) push(sq, y, static_cast<Element>(row), Prune::Jordan);
      }
    } else if (v >= 0) {
      // (x^2 y) * x is known; yx must be the column of row x^2 holding it.
      const int rhs = p.raw(static_cast<Element>(v), x);
      if (rhs >= 0) {
        const int col = p.where_in_row(sq, static_cast<Element>(rhs));
        if (col >= 0) push(y, x, static_cast<Element>(col), Prune::Jordan);
      }
    }
    return true;
  }

  Constraints c_;
  EngineCounters counters_;
  std::vector<Pending> queue_;
};

/// Every completion of p to a loop table with the given properties, in search
/// order. Each result is re-validated with the full-table predicates.
inline std::vector<LoopTable> complete_partial(const PartialTable& p, const Constraints& c,
                                               EngineCounters* counters = nullptr) {
  Engine engine(c);
  PartialTable start = p;
  std::vector<LoopTable> out;
  if (engine.initialize(start)) {
    engine.solve(start, [&](const PartialTable& leaf) {
      if (!engine.accepts(leaf)) throw std::logic_error("completion engine produced a table violating its constraints");
      out.push_back(leaf.to_loop());
      return true;
    });
  }
  if (counters) counters->add(engine.counters());
  return out;
}

}  // namespace loopforge
