#pragma once

// Fixtures and brute-force oracles shared by the test binaries. The oracles
// deliberately avoid the library's search, canonical form and power code.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "loopforge/loopforge.hpp"

namespace lftest {

using loopforge::Element;
using loopforge::LoopTable;

#ifndef LOOPFORGE_FIXTURES
#define LOOPFORGE_FIXTURES "tests/fixtures"
#endif

inline std::string fixture(const std::string& name) { return std::string(LOOPFORGE_FIXTURES) + "/" + name; }

inline LoopTable table_f() { return loopforge::read_table_file(fixture("tablef.loop")); }

using Grid = std::vector<std::vector<int>>;

inline Grid grid_of(const LoopTable& q) {
  Grid g(q.order(), std::vector<int>(q.order()));
  for (std::size_t i = 0; i < q.order(); ++i) {
    for (std::size_t j = 0; j < q.order(); ++j) g[i][j] = q.mul(static_cast<Element>(i), static_cast<Element>(j));
  }
  return g;
}

inline bool latin(const Grid& g) {
  const std::size_t n = g.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<bool> r(n), c(n);
    for (std::size_t j = 0; j < n; ++j) {
      if (r[g[i][j]] || c[g[j][i]]) return false;
      r[g[i][j]] = c[g[j][i]] = true;
    }
  }
  return true;
}

inline bool commutative(const Grid& g) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (g[i][j] != g[j][i]) return false;
    }
  }
  return true;
}

inline bool jordan(const Grid& g) {
  const std::size_t n = g.size();
  if (!commutative(g)) return false;
  for (std::size_t x = 0; x < n; ++x) {
    const int s = g[x][x];
    for (std::size_t y = 0; y < n; ++y) {
      if (g[s][g[y][x]] != g[g[s][y]][x]) return false;
    }
  }
  return true;
}

inline bool associative(const Grid& g) {
  const std::size_t n = g.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (g[g[a][b]][c] != g[a][g[b][c]]) return false;
  return true;
}

/// Every loop of order n by filling the (n-1)^2 interior cells with all n^((n-1)^2)
/// value choices and keeping the Latin ones. Practical for n <= 4.
inline std::vector<Grid> all_loops_by_filling(int n) {
  std::vector<Grid> out;
  Grid g(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i) g[0][i] = g[i][0] = i;
  const int cells = (n - 1) * (n - 1);
  std::vector<int> digits(cells, 0);
  for (;;) {
    for (int k = 0; k < cells; ++k) g[1 + k / (n - 1)][1 + k % (n - 1)] = digits[k];
    if (latin(g)) out.push_back(g);
    int k = 0;
    while (k < cells && ++digits[k] == n) digits[k++] = 0;
    if (k == cells) break;
  }
  return out;
}

/// Every loop of order n, one row-permutation at a time. Fine for n <= 5.
inline std::vector<Grid> all_loops_by_rows(int n) {
  std::vector<Grid> out;
  Grid g(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i) g[0][i] = i;
  std::function<void(int)> rec = [&](int r) {
    if (r == n) {
      out.push_back(g);
      return;
    }
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      if (perm[0] != r) continue;
      bool ok = true;
      for (int j = 0; j < n && ok; ++j) {
        for (int i = 0; i < r && ok; ++i) ok = g[i][j] != perm[j];
      }
      if (!ok) continue;
      g[r] = perm;
      rec(r + 1);
    } while (std::next_permutation(perm.begin(), perm.end()));
  };
  if (n == 1) {
    out.push_back({{0}});
    return out;
  }
  rec(1);
  return out;
}

/// Least row-major serialization over all relabelings fixing 0, by trying every one.
inline std::vector<int> brute_canonical(const Grid& g) {
  const int n = static_cast<int>(g.size());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best;
  do {
    std::vector<int> cand(n * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) cand[perm[i] * n + perm[j]] = perm[g[i][j]];
    if (best.empty() || cand < best) best = cand;
  } while (std::next_permutation(perm.begin() + 1, perm.end()));
  return best;
}

inline std::vector<int> bytes_of(const loopforge::CanonicalForm& f) { return {f.bytes.begin(), f.bytes.end()}; }

/// Values of every full bracketing of k copies of x, by listing the trees.
inline std::set<int> bracketings(const Grid& g, int x, int k) {
  std::map<int, std::set<int>> memo;
  std::function<std::set<int>(int)> rec = [&](int m) -> std::set<int> {
    if (m == 1) return {x};
    if (auto it = memo.find(m); it != memo.end()) return it->second;
    std::set<int> out;
    for (int i = 1; i < m; ++i) {
      for (int a : rec(i))
        for (int b : rec(m - i)) out.insert(g[a][b]);
    }
    return memo[m] = out;
  };
  return rec(k);
}

inline LoopTable random_relabel(const LoopTable& q, std::mt19937& rng) {
  std::vector<Element> perm(q.order());
  std::iota(perm.begin(), perm.end(), Element{0});
  std::shuffle(perm.begin() + 1, perm.end(), rng);
  return loopforge::relabel(q, perm);
}

inline std::vector<LoopTable> enumerate(loopforge::SearchConfig cfg) { return loopforge::enumerate_loops(cfg).tables; }

}  // namespace lftest
