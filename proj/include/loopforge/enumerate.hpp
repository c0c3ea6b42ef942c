#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "loopforge/algebra.hpp"
#include "loopforge/canonical.hpp"
#include "loopforge/error.hpp"
#include "loopforge/io.hpp"
#include "loopforge/partial_table.hpp"
#include "loopforge/powers.hpp"
#include "loopforge/search.hpp"

namespace loopforge {

inline constexpr std::size_t kDefaultOrderCap = 10;

struct SearchConfig {
  std::size_t order = 1;
  bool require_commutative = false;
  bool require_jordan = false;
  /// Squares form a permutation. Only legal for odd order with commutativity.
  bool require_identity_diag_odd = false;
  bool up_to_iso = true;
  bool nonassociative_only = false;
  std::optional<std::size_t> limit;
  std::size_t worker_count = 1;

  /// Constraint propagation; off means generate-and-test.
  bool propagate = true;
  /// Keep only first rows that are lexicographically least under relabelings
  /// fixing 0 and 1. Only used with up_to_iso.
  bool symmetry_breaking = true;
  /// Rows completed before the tree is handed out to workers.
  std::size_t split_rows = 1;
  std::size_t order_cap = kDefaultOrderCap;

  static SearchConfig loops(std::size_t n) {
    SearchConfig c;
    c.order = n;
    return c;
  }
  static SearchConfig commutative(std::size_t n) {
    SearchConfig c = loops(n);
    c.require_commutative = true;
    c.require_identity_diag_odd = n % 2 == 1;
    return c;
  }
  static SearchConfig jordan(std::size_t n) {
    SearchConfig c = commutative(n);
    c.require_jordan = true;
    return c;
  }

  Constraints constraints() const {
    Constraints k;
    k.commutative = require_commutative;
    k.jordan = require_jordan;
    k.odd_diagonal = require_identity_diag_odd;
    k.propagate = propagate;
    return k;
  }

  void validate() const {
    if (order == 0) throw LoopError(ErrorKind::InvalidConfig, "order must be positive");
    if (order > order_cap || order > kMaxPartialOrder) {
      throw LoopError(ErrorKind::OrderTooLarge,
                      "order " + std::to_string(order) + " exceeds cap " + std::to_string(std::min(order_cap, kMaxPartialOrder)));
    }
    if (require_jordan && !require_commutative) throw LoopError(ErrorKind::InvalidConfig, "jordan requires commutative");
    if (require_identity_diag_odd && (order % 2 == 0 || !require_commutative)) {
      throw LoopError(ErrorKind::InvalidConfig, "diagonal pruning needs odd order and commutativity");
    }
    if (worker_count == 0) throw LoopError(ErrorKind::InvalidConfig, "worker_count must be positive");
    if (limit && *limit == 0) throw LoopError(ErrorKind::InvalidConfig, "limit must be positive");
  }
};

struct SearchStats {
  std::uint64_t nodes_expanded = 0;
  std::uint64_t tables_emitted = 0;
  std::uint64_t iso_classes = 0;
  std::array<std::uint64_t, kPruneKinds> prunes_by_constraint{};
  std::chrono::milliseconds wall_time{0};
};

struct Enumeration {
  /// Sorted ascending: by canonical form when up_to_iso (each table is then
  /// its own canonical form), otherwise by row-major serialization.
  std::vector<LoopTable> tables;
  SearchStats stats;
};

/// Least conjugate, under relabelings fixing 0 and 1, of a first row
/// (a permutation with row[0] = 1): the cycle through 0 labeled 0,1,2,...
/// followed by the remaining cycles by increasing length, each labeled
/// consecutively.
inline std::vector<Element> least_first_row(std::span<const Element> row) {
  const std::size_t n = row.size();
  std::vector<bool> seen(n, false);
  std::size_t zero_cycle = 0;
  for (std::size_t v = 0;;) {
    seen[v] = true;
    ++zero_cycle;
    v = row[v];
    if (v == 0) break;
  }
  std::vector<std::size_t> lengths;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::size_t len = 0;
    for (std::size_t v = s; !seen[v]; v = row[v]) {
      seen[v] = true;
      ++len;
    }
    lengths.push_back(len);
  }
  std::sort(lengths.begin(), lengths.end());
  std::vector<Element> out(n);
  auto lay_cycle = [&](std::size_t start, std::size_t len) {
    for (std::size_t i = 0; i + 1 < len; ++i) out[start + i] = static_cast<Element>(start + i + 1);
    out[start + len - 1] = static_cast<Element>(start);
  };
  lay_cycle(0, zero_cycle);
  std::size_t next = zero_cycle;
  for (const std::size_t len : lengths) {
    lay_cycle(next, len);
    next += len;
  }
  return out;
}

namespace detail {

inline bool rows_complete(const PartialTable& p, std::size_t rows) {
  const std::size_t last = std::min(rows, p.order() - 1);
  for (std::size_t r = 1; r <= last; ++r) {
    for (std::size_t c = 0; c < p.order(); ++c) {
      if (!p.filled(static_cast<Element>(r), static_cast<Element>(c))) return false;
    }
  }
  return true;
}

inline bool first_row_is_least(const PartialTable& p) {
  std::vector<Element> row(p.order());
  for (std::size_t c = 0; c < p.order(); ++c) row[c] = *p.value(1, static_cast<Element>(c));
  return least_first_row(row) == row;
}

inline void verify_emitted(const LoopTable& q, const SearchConfig& cfg) {
  bool ok = true;
  if (cfg.require_commutative) ok = ok && is_commutative(q);
  if (cfg.require_jordan) ok = ok && is_jordan(q);
  if (cfg.require_identity_diag_odd) {
    for (const auto count : diagonal_stats(q)) ok = ok && count == 1;
  }
  if (!ok) throw std::logic_error("enumerator emitted a table that fails its own constraints");
}

}  // namespace detail

/// Every loop of the configured order and properties, each exactly once
/// (once per isomorphism class with up_to_iso).
///
/// The tree is split once the first `split_rows` non-identity rows are filled;
/// those subtrees go to a pool of worker threads, each with its own engine
/// and states. Results are merged and sorted, so the output does not depend
/// on the worker count unless a limit cuts the search short.
inline Enumeration enumerate_loops(const SearchConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = cfg.order;
  const Constraints cons = cfg.constraints();
  const bool break_symmetry = cfg.up_to_iso && cfg.symmetry_breaking && n > 2;

  Enumeration result;
  EngineCounters totals;

  // Work units: states with the first split_rows rows complete.
  std::vector<PartialTable> units;
  {
    Engine splitter(cons);
    PartialTable start = PartialTable::loop_skeleton(n);
    if (splitter.initialize(start)) {
      splitter.expand(
          start, [&](const PartialTable& p) { return detail::rows_complete(p, cfg.split_rows); },
          [&](const PartialTable& p) {
            if (break_symmetry && !detail::first_row_is_least(p)) {
              ++totals.prunes[static_cast<int>(Prune::Symmetry)];
            } else {
              units.push_back(p);
            }
            return true;
          });
    }
    totals.add(splitter.counters());
  }

  std::mutex mu;
  std::set<CanonicalForm> classes;
  std::vector<LoopTable> raw;
  std::atomic<std::size_t> next_unit{0};
  std::atomic<bool> stop{false};
  std::atomic<std::uint64_t> emitted{0};

  auto worker = [&]() {
    Engine engine(cons);
    for (;;) {
      if (stop.load()) break;
      const std::size_t i = next_unit.fetch_add(1);
      if (i >= units.size()) break;
      engine.solve(units[i], [&](const PartialTable& leaf) {
        if (stop.load()) return false;
        LoopTable q = leaf.to_loop();
        detail::verify_emitted(q, cfg);
        if (cfg.nonassociative_only && is_associative(q)) return true;
        emitted.fetch_add(1);
        if (cfg.up_to_iso) {
          CanonicalForm form = canonical_form(q);
          std::lock_guard lock(mu);
          classes.insert(std::move(form));
          if (cfg.limit && classes.size() >= *cfg.limit) stop = true;
        } else {
          std::lock_guard lock(mu);
          raw.push_back(std::move(q));
          if (cfg.limit && raw.size() >= *cfg.limit) stop = true;
        }
        return !stop.load();
      });
    }
    std::lock_guard lock(mu);
    totals.add(engine.counters());
  };

  const std::size_t workers = std::min(cfg.worker_count, std::max<std::size_t>(units.size(), 1));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  if (cfg.up_to_iso) {
    for (const auto& form : classes) result.tables.push_back(form.table());
  } else {
    std::sort(raw.begin(), raw.end(), [](const LoopTable& a, const LoopTable& b) {
      return std::lexicographical_compare(a.cells().begin(), a.cells().end(), b.cells().begin(), b.cells().end());
    });
    result.tables = std::move(raw);
  }
  if (cfg.limit && result.tables.size() > *cfg.limit) result.tables.erase(result.tables.begin() + static_cast<std::ptrdiff_t>(*cfg.limit), result.tables.end());

  result.stats.nodes_expanded = totals.nodes;
  result.stats.prunes_by_constraint = totals.prunes;
  result.stats.tables_emitted = emitted.load();
  result.stats.iso_classes = cfg.up_to_iso ? result.tables.size() : 0;
  result.stats.wall_time =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
  return result;
}

/// SearchStats as JSON. Wall time is included only on request so that
/// repeated runs produce identical files.
inline nlohmann::json stats_to_json(const SearchConfig& cfg, const SearchStats& s, bool include_timing) {
  nlohmann::json prunes = nlohmann::json::object();
  for (std::size_t i = 0; i < kPruneKinds; ++i) prunes[std::string(to_string(static_cast<Prune>(i)))] = s.prunes_by_constraint[i];
  nlohmann::json j = {
      {"schema", 1},
      {"order", cfg.order},
      {"commutative", cfg.require_commutative},
      {"jordan", cfg.require_jordan},
      {"diagonal_pruning", cfg.require_identity_diag_odd},
      {"up_to_iso", cfg.up_to_iso},
      {"nonassociative_only", cfg.nonassociative_only},
      {"nodes_expanded", s.nodes_expanded},
      {"tables_emitted", s.tables_emitted},
      {"iso_classes", s.iso_classes},
      {"prunes_by_constraint", prunes},
  };
  if (include_timing) j["wall_time_ms"] = s.wall_time.count();
  return j;
}

/// Writes one `<canonical hash>.loop` file per table (unless count_only) and stats.json.
inline void write_enumeration(const std::filesystem::path& dir, const SearchConfig& cfg, const Enumeration& e,
                              bool count_only, bool include_timing) {
  std::filesystem::create_directories(dir);
  if (!count_only) {
    for (const auto& q : e.tables) {
      const std::string name = canonical_form(q).hash_hex() + ".loop";
      write_text_file((dir / name).string(), format_table(q));
    }
  }
  write_text_file((dir / "stats.json").string(), stats_to_json(cfg, e.stats, include_timing).dump(2) + "\n");
}

struct PowerWitness {
  LoopTable loop;
  Element generator;
};

/// First Jordan loop of order n (in canonical order) with a generating element
/// x such that x^j is well-defined for all j < k but x^k is not.
inline std::optional<PowerWitness> find_power_witness(std::size_t n, int k, std::size_t workers = 1,
                                                      std::size_t order_cap = kDefaultOrderCap) {
  SearchConfig cfg = SearchConfig::jordan(n);
  cfg.worker_count = workers;
  cfg.order_cap = order_cap;
  if (k < 1) throw LoopError(ErrorKind::InvalidConfig, "exponent must be positive");
  const auto loops = enumerate_loops(cfg);
  for (const auto& q : loops.tables) {
    for (std::size_t xi = 0; xi < n; ++xi) {
      const auto x = static_cast<Element>(xi);
      if (closure(q, bit(x)) != q.all()) continue;
      const auto prof = power_profile(q, x, k);
      if (prof.first_ill_defined() == k) return PowerWitness{q, x};
    }
  }
  return std::nullopt;
}

}  // namespace loopforge
