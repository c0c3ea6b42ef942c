#pragma once

#include <vector>

#include "loopforge/loop_table.hpp"

namespace loopforge {

/// Z_n with element i standing for i mod n.
inline LoopTable cyclic_group(std::size_t n) {
  std::vector<Element> cells(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) cells[i * n + j] = static_cast<Element>((i + j) % n);
  }
  return LoopTable::from_cells(n, std::move(cells));
}

/// A x B with (a, b) encoded as a * |B| + b.
inline LoopTable direct_product(const LoopTable& a, const LoopTable& b) {
  const std::size_t na = a.order(), nb = b.order(), n = na * nb;
  std::vector<Element> cells(n * n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      const auto xa = static_cast<Element>(x / nb), xb = static_cast<Element>(x % nb);
      const auto ya = static_cast<Element>(y / nb), yb = static_cast<Element>(y % nb);
      cells[x * n + y] = static_cast<Element>(a.mul(xa, ya) * nb + b.mul(xb, yb));
    }
  }
  return LoopTable::from_cells(n, std::move(cells));
}

}  // namespace loopforge
