#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "loopforge/error.hpp"
#include "loopforge/loop_table.hpp"

namespace loopforge {

/// Lexicographically least row-major serialization of a loop table over all
/// relabelings that fix the neutral element. Two loops are isomorphic iff
/// their canonical forms are equal.
struct CanonicalForm {
  std::size_t order = 0;
  std::vector<Element> bytes;

  friend bool operator==(const CanonicalForm&, const CanonicalForm&) = default;
  friend std::strong_ordering operator<=>(const CanonicalForm& a, const CanonicalForm& b) {
    if (a.order != b.order) return a.order <=> b.order;
    return std::lexicographical_compare_three_way(a.bytes.begin(), a.bytes.end(), b.bytes.begin(), b.bytes.end());
  }

  LoopTable table() const { return LoopTable::from_cells(order, bytes); }

  /// 64-bit FNV-1a of the order and bytes, as 16 hex digits.
  std::string hash_hex() const {
    std::uint64_t h = 14695981039346656037ull;
    auto mix = [&](std::uint8_t b) {
      h ^= b;
      h *= 1099511628211ull;
    };
    mix(static_cast<std::uint8_t>(order));
    for (const Element b : bytes) mix(b);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
      out[i] = kHex[h & 0xf];
      h >>= 4;
    }
    return out;
  }
};

struct CanonicalLabeling {
  CanonicalForm form;
  /// relabel[old] = new; applying it to the input yields form.
  std::vector<Element> relabel;
};

/// Applies the element bijection perm (perm[0] must be 0): the result maps
/// perm[x], perm[y] to perm[x*y].
inline LoopTable relabel(const LoopTable& q, std::span<const Element> perm) {
  const std::size_t n = q.order();
  if (perm.size() != n || perm[0] != kIdentity) throw LoopError(ErrorKind::InvalidConfig, "relabeling must fix 0");
  std::vector<Element> cells(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      cells[perm[i] * n + perm[j]] = perm[q.mul(static_cast<Element>(i), static_cast<Element>(j))];
    }
  }
  return LoopTable::from_cells(n, std::move(cells));
}

namespace detail {

// Branch and bound over the preimages of labels 1, 2, ... . Label 1 goes to
// some p; row 1 of the relabeled table is then the conjugate of the left
// translation by p. While labels 0..m-1 are fixed, the row-1 cells 1..m-1 are
// either known or at least m, which bounds the comparison against the best
// serialization found so far. The first unknown row-1 cell forces the next
// preimage (labeling its value m is strictly best); with no unknown cell, the
// next preimage must start a shortest remaining cycle of the translation.
class CanonicalSearch {
 public:
  explicit CanonicalSearch(const LoopTable& q) : q_(q), n_(q.order()) {}

  CanonicalLabeling run() {
    if (n_ == 1) return {{1, {0}}, {0}};
    std::vector<std::pair<std::size_t, Element>> starts;
    for (std::size_t p = 1; p < n_; ++p) starts.emplace_back(cycle_length(static_cast<Element>(p), 0), static_cast<Element>(p));
    std::sort(starts.begin(), starts.end());
    const std::size_t best_len = starts.front().first;
    for (const auto& [len, p] : starts) {
      if (len != best_len) break;
      p_ = p;
      label_.assign(n_, kUnlabeled);
      pre_.assign(n_, 0);
      label_[0] = 0;
      pre_[0] = 0;
      label_[p] = 1;
      pre_[1] = p;
      dfs(2);
    }
    std::vector<Element> relabel(best_label_.begin(), best_label_.end());
    return {{n_, best_}, relabel};
  }

 private:
  static constexpr Element kUnlabeled = 0xff;

  std::size_t cycle_length(Element p, Element start) const {
    std::size_t len = 1;
    for (Element v = q_.mul(p, start); v != start; v = q_.mul(p, v)) ++len;
    return len;
  }

  // -1: prefix worse than best, 0: undecided or equal, 1: strictly better.
  int compare_row1(std::size_t m, std::optional<std::size_t>& first_unknown) const {
    first_unknown.reset();
    int verdict = have_best_ ? 0 : 1;
    for (std::size_t j = 1; j < m; ++j) {
      const Element v = label_[q_.mul(p_, pre_[j])];
      if (v == kUnlabeled) {
        if (!first_unknown) first_unknown = j;
        if (verdict == 0 && best_[n_ + j] < m) return -1;
        if (verdict == 0) verdict = 2;  // undecided from here on
        continue;
      }
      if (verdict == 0) {
        if (v < best_[n_ + j]) verdict = 1;
        if (v > best_[n_ + j]) return -1;
      }
    }
    return verdict == 2 ? 0 : verdict;
  }

  void dfs(std::size_t m) {
    std::optional<std::size_t> unknown;
    if (compare_row1(m, unknown) < 0) return;
    if (m == n_) {
      leaf();
      return;
    }
    if (unknown) {
      assign(m, q_.mul(p_, pre_[*unknown]));
      return;
    }
    std::size_t shortest = n_ + 1;
    for (std::size_t x = 1; x < n_; ++x) {
      if (label_[x] == kUnlabeled) shortest = std::min(shortest, cycle_length(p_, static_cast<Element>(x)));
    }
    for (std::size_t x = 1; x < n_; ++x) {
      if (label_[x] == kUnlabeled && cycle_length(p_, static_cast<Element>(x)) == shortest) {
        assign(m, static_cast<Element>(x));
      }
    }
  }

  void assign(std::size_t m, Element x) {
    label_[x] = static_cast<Element>(m);
    pre_[m] = x;
    dfs(m + 1);
    label_[x] = kUnlabeled;
  }

  void leaf() {
    std::vector<Element> cand(n_ * n_);
    bool better = !have_best_;
    bool decided = better;
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        const Element v = label_[q_.mul(pre_[i], pre_[j])];
        cand[i * n_ + j] = v;
        if (!decided) {
          const Element b = best_[i * n_ + j];
          if (v < b) {
            better = decided = true;
          } else if (v > b) {
            return;
          }
        }
      }
    }
    if (!better) return;
    best_ = std::move(cand);
    best_label_ = label_;
    have_best_ = true;
  }

  const LoopTable& q_;
  std::size_t n_;
  Element p_ = 1;
  std::vector<Element> label_;
  std::vector<Element> pre_;
  std::vector<Element> best_;
  std::vector<Element> best_label_;
  bool have_best_ = false;
};

}  // namespace detail

inline CanonicalLabeling canonical_labeling(const LoopTable& q) { return detail::CanonicalSearch(q).run(); }

inline CanonicalForm canonical_form(const LoopTable& q) { return canonical_labeling(q).form; }

/// Bijection phi with phi(x*y) = phi(x)*phi(y) from a onto b, when one exists.
inline std::optional<std::vector<Element>> isomorphism(const LoopTable& a, const LoopTable& b) {
  if (a.order() != b.order()) return std::nullopt;
  const auto ca = canonical_labeling(a);
  const auto cb = canonical_labeling(b);
  if (ca.form != cb.form) return std::nullopt;
  const std::size_t n = a.order();
  std::vector<Element> inv_b(n);
  for (std::size_t x = 0; x < n; ++x) inv_b[cb.relabel[x]] = static_cast<Element>(x);
  std::vector<Element> phi(n);
  for (std::size_t x = 0; x < n; ++x) phi[x] = inv_b[ca.relabel[x]];
  return phi;
}

inline bool are_isomorphic(const LoopTable& a, const LoopTable& b) { return isomorphism(a, b).has_value(); }

/// True iff phi is an isomorphism from a onto b.
inline bool is_isomorphism(const LoopTable& a, const LoopTable& b, std::span<const Element> phi) {
  const std::size_t n = a.order();
  if (b.order() != n || phi.size() != n) return false;
  Mask image = 0;
  for (const Element v : phi) image |= bit(v);
  if (image != a.all()) return false;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (phi[a.mul(static_cast<Element>(x), static_cast<Element>(y))] != b.mul(phi[x], phi[y])) return false;
    }
  }
  return true;
}

}  // namespace loopforge
