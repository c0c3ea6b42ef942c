#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "loopforge/algebra.hpp"
#include "loopforge/loop_table.hpp"

namespace loopforge {

/// Right-associated power x(x(...(xe)...)) with k factors. Negative k is the
/// right-associated power of the inverse: x^{-k} = (x^{-1})^k.
inline Element rpow(const LoopTable& q, Element x, std::int64_t k) {
  if (k < 0) {
    x = inverse(q, x);
    k = -k;
  }
  Element acc = kIdentity;
  for (std::int64_t i = 0; i < k; ++i) acc = q.mul(x, acc);
  return acc;
}

/// Largest exponent the default power analysis reaches for a loop of order n.
constexpr int default_max_exp(std::size_t n) { return static_cast<int>(2 * n + 8); }

/// Powers of a single element.
///
/// bracket_sets[k] holds the values of every bracketing of a product of k
/// copies of the element; the power x^k is well-defined exactly when that set
/// is a singleton. Index 0 of each array is the empty product e.
struct PowerProfile {
  Element element = kIdentity;
  int max_exp = 0;
  std::vector<Element> rpow;
  std::vector<Mask> bracket_sets;
  std::vector<bool> well_defined;
  Element inverse = kIdentity;
  std::size_t subloop_order = 1;

  /// Smallest k with x^k not well-defined, if any up to max_exp.
  std::optional<int> first_ill_defined() const {
    for (int k = 1; k <= max_exp; ++k) {
      if (!well_defined[k]) return k;
    }
    return std::nullopt;
  }
};

/// Fills a PowerProfile up to max_exp. bracket_sets follow the convolution
///   B[1] = {x},  B[k] = union over 0 < i < k of B[i] * B[k - i]
/// since the outermost product of any bracketing splits the k factors into a
/// left group of i and a right group of k - i.
inline PowerProfile power_profile(const LoopTable& q, Element x, int max_exp) {
  if (max_exp < 1) max_exp = 1;
  PowerProfile p;
  p.element = x;
  p.max_exp = max_exp;
  p.rpow.resize(max_exp + 1);
  p.bracket_sets.assign(max_exp + 1, 0);
  p.well_defined.assign(max_exp + 1, true);

  p.rpow[0] = kIdentity;
  for (int k = 1; k <= max_exp; ++k) p.rpow[k] = q.mul(x, p.rpow[k - 1]);

  p.bracket_sets[0] = bit(kIdentity);
  p.bracket_sets[1] = bit(x);
  for (int k = 2; k <= max_exp; ++k) {
    Mask acc = 0;
    for (int i = 1; i < k; ++i) {
      const Mask right = p.bracket_sets[k - i];
      for_each_bit(p.bracket_sets[i], [&](Element a) {
        const auto row = q.row(a);
        for_each_bit(right, [&](Element b) { acc |= bit(row[b]); });
      });
    }
    p.bracket_sets[k] = acc;
    p.well_defined[k] = popcount(acc) == 1;
  }
  p.inverse = inverse(q, x);
  p.subloop_order = monogenic_subloop(q, x).size();
  return p;
}

inline PowerProfile power_profile(const LoopTable& q, Element x) {
  return power_profile(q, x, default_max_exp(q.order()));
}

/// x^{a_0} (x^{2 a_1} (x^{4 a_2} ( ... (x^{2^k a_k})))) for the binary digits a_i of n,
/// with each x^{2^i} taken as a right-associated power. Zero digits are
/// skipped (their factor is e).
inline Element binary_expansion_power(const LoopTable& q, Element x, std::uint64_t n) {
  if (n == 0) return kIdentity;
  int top = 63;
  while (!((n >> top) & 1u)) --top;
  Element acc = rpow(q, x, std::int64_t{1} << top);
  for (int b = top - 1; b >= 0; --b) {
    if ((n >> b) & 1u) acc = q.mul(rpow(q, x, std::int64_t{1} << b), acc);
  }
  return acc;
}

}  // namespace loopforge
