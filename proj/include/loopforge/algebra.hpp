#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <set>
#include <vector>

#include "loopforge/error.hpp"
#include "loopforge/loop_table.hpp"

namespace loopforge {

inline bool is_commutative(const LoopTable& q) {
  const std::size_t n = q.order();
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      if (q.mul(static_cast<Element>(x), static_cast<Element>(y)) != q.mul(static_cast<Element>(y), static_cast<Element>(x))) {
        return false;
      }
    }
  }
  return true;
}

/// First triple (x, y, z) with (xy)z != x(yz), scanning in lexicographic order.
inline std::optional<std::array<Element, 3>> associativity_violation(const LoopTable& q, Mask within = ~Mask{0}) {
  const Mask s = within & q.all();
  std::optional<std::array<Element, 3>> found;
  for_each_bit(s, [&](Element x) {
    if (found) return;
    for_each_bit(s, [&](Element y) {
      if (found) return;
      const Element xy = q.mul(x, y);
      for_each_bit(s, [&](Element z) {
        if (!found && q.mul(xy, z) != q.mul(x, q.mul(y, z))) found = std::array<Element, 3>{x, y, z};
      });
    });
  });
  return found;
}

inline bool is_associative(const LoopTable& q) { return !associativity_violation(q).has_value(); }

/// First pair (x, y) with x^2(yx) != (x^2 y)x. The identity is checked as
/// written; commutativity is a separate requirement (see is_jordan).
inline std::optional<std::pair<Element, Element>> jordan_violation(const LoopTable& q) {
  const std::size_t n = q.order();
  for (std::size_t xi = 0; xi < n; ++xi) {
    const auto x = static_cast<Element>(xi);
    const Element sq = q.mul(x, x);
    for (std::size_t yi = 0; yi < n; ++yi) {
      const auto y = static_cast<Element>(yi);
      if (q.mul(sq, q.mul(y, x)) != q.mul(q.mul(sq, y), x)) return std::pair{x, y};
    }
  }
  return std::nullopt;
}

/// A Jordan loop is a commutative loop satisfying x^2(yx) = (x^2 y)x.
inline bool is_jordan(const LoopTable& q) { return is_commutative(q) && !jordan_violation(q); }

/// x * x^2 = e for every x.
inline bool is_exponent3(const LoopTable& q) {
  for (std::size_t xi = 0; xi < q.order(); ++xi) {
    const auto x = static_cast<Element>(xi);
    if (q.mul(x, q.mul(x, x)) != kIdentity) return false;
  }
  return true;
}

/// Smallest product-closed set containing `seed` and e. In a finite loop
/// this is the generated subloop.
inline Mask closure(const LoopTable& q, Mask seed) {
  Mask s = (seed | bit(kIdentity)) & q.all();
  for (;;) {
    Mask grown = s;
    for_each_bit(s, [&](Element a) {
      for_each_bit(s, [&](Element b) { grown |= bit(q.mul(a, b)); });
    });
    if (grown == s) return s;
    s = grown;
  }
}

struct Subloop {
  Mask carrier = bit(kIdentity);
  std::optional<Element> generator;

  std::size_t size() const { return static_cast<std::size_t>(popcount(carrier)); }
  bool contains(Element x) const { return (carrier & bit(x)) != 0; }
  std::vector<Element> elements() const {
    std::vector<Element> out;
    for_each_bit(carrier, [&](Element x) { out.push_back(x); });
    return out;
  }
  friend bool operator==(const Subloop&, const Subloop&) = default;
};

/// <x>, the subloop generated by x.
inline Subloop monogenic_subloop(const LoopTable& q, Element x) { return Subloop{closure(q, bit(x)), x}; }

inline constexpr std::size_t kDefaultSubloopOrderBound = 12;

/// Every subloop of q, sorted by size and then by carrier mask. Obtained by
/// closing all one- and two-element generator sets, then closing the family
/// under joins until nothing new appears.
inline std::vector<Subloop> all_subloops(const LoopTable& q, std::size_t max_order = kDefaultSubloopOrderBound) {
  const std::size_t n = q.order();
  if (n > max_order) {
    throw LoopError(ErrorKind::OrderTooLarge, "subloop lattice limited to order " + std::to_string(max_order));
  }
  std::set<Mask> found;
  std::vector<std::pair<Mask, std::optional<Element>>> with_gen;
  for (std::size_t x = 0; x < n; ++x) {
    const Mask m = closure(q, bit(x));
    if (found.insert(m).second) with_gen.emplace_back(m, static_cast<Element>(x));
  }
  for (std::size_t x = 1; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      const Mask m = closure(q, bit(x) | bit(y));
      if (found.insert(m).second) with_gen.emplace_back(m, std::nullopt);
    }
  }
  for (bool grew = true; grew;) {
    grew = false;
    const std::vector<Mask> current(found.begin(), found.end());
    for (std::size_t i = 0; i < current.size(); ++i) {
      for (std::size_t j = i + 1; j < current.size(); ++j) {
        const Mask m = closure(q, current[i] | current[j]);
        if (found.insert(m).second) {
          with_gen.emplace_back(m, std::nullopt);
          grew = true;
        }
      }
    }
  }
  std::vector<Subloop> out;
  out.reserve(with_gen.size());
  for (const auto& [m, g] : with_gen) out.push_back(Subloop{m, g});
  std::sort(out.begin(), out.end(), [](const Subloop& a, const Subloop& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.carrier < b.carrier;
  });
  return out;
}

/// Number of times each element occurs on the main diagonal (x*x).
inline std::vector<std::size_t> diagonal_stats(const LoopTable& q) {
  std::vector<std::size_t> counts(q.order(), 0);
  for (std::size_t x = 0; x < q.order(); ++x) ++counts[q.mul(static_cast<Element>(x), static_cast<Element>(x))];
  return counts;
}

/// True iff some x != e has x*x = e.
inline bool has_nontrivial_involution(const LoopTable& q) {
  for (std::size_t x = 1; x < q.order(); ++x) {
    if (q.mul(static_cast<Element>(x), static_cast<Element>(x)) == kIdentity) return true;
  }
  return false;
}

/// Inverse of the squaring map. Throws NoSquareRoot when squaring is not a bijection.
inline std::vector<Element> square_root_map(const LoopTable& q) {
  const std::size_t n = q.order();
  std::vector<Element> root(n, 0);
  Mask hit = 0;
  for (std::size_t x = 0; x < n; ++x) {
    const Element sq = q.mul(static_cast<Element>(x), static_cast<Element>(x));
    if (hit & bit(sq)) {
      throw LoopError(ErrorKind::NoSquareRoot, "element " + std::to_string(sq) + " has several square roots");
    }
    hit |= bit(sq);
    root[sq] = static_cast<Element>(x);
  }
  return root;
}

}  // namespace loopforge
