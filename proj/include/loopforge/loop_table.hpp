#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "loopforge/error.hpp"

namespace loopforge {

/// Index of an element of a finite loop. Element 0 is always the neutral element.
using Element = std::uint8_t;

/// Set of elements as a bit mask (bit i set iff element i is a member).
using Mask = std::uint64_t;

inline constexpr Element kIdentity = 0;
inline constexpr std::size_t kMaxOrder = 64;

constexpr Mask bit(std::size_t i) { return Mask{1} << i; }
constexpr Mask full_mask(std::size_t n) { return n >= 64 ? ~Mask{0} : bit(n) - 1; }
constexpr int popcount(Mask m) { return std::popcount(m); }
constexpr Element lowest(Mask m) { return static_cast<Element>(std::countr_zero(m)); }

template <typename F>
constexpr void for_each_bit(Mask m, F&& f) {
  while (m != 0) {
    f(lowest(m));
    m &= m - 1;
  }
}

/// A validated multiplication table of a finite loop: a Latin square whose
/// row 0 and column 0 are the identity permutation. Immutable once built.
class LoopTable {
 public:
  /// Validates and adopts a row-major table of n*n entries.
  static LoopTable from_cells(std::size_t n, std::vector<Element> cells) {
    validate(n, cells);
    return LoopTable(n, std::move(cells));
  }

  static LoopTable from_rows(const std::vector<std::vector<int>>& rows) {
    const std::size_t n = rows.size();
    if (n == 0 || n > kMaxOrder) {
      throw LoopError(n == 0 ? ErrorKind::Malformed : ErrorKind::OrderTooLarge,
                      "order " + std::to_string(n));
    }
    std::vector<Element> cells;
    cells.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      if (rows[i].size() != n) {
        throw LoopError(ErrorKind::Malformed, "row " + std::to_string(i) + " has " +
                                                  std::to_string(rows[i].size()) + " entries, expected " +
                                                  std::to_string(n));
      }
      for (std::size_t j = 0; j < n; ++j) {
        const int v = rows[i][j];
        if (v < 0 || static_cast<std::size_t>(v) >= n) {
          throw LoopError(ErrorKind::Malformed, "entry " + std::to_string(v) + " at row " + std::to_string(i) +
                                                    " column " + std::to_string(j) + " out of range");
        }
        cells.push_back(static_cast<Element>(v));
      }
    }
    return from_cells(n, std::move(cells));
  }

  std::size_t order() const noexcept { return n_; }

  Element mul(Element x, Element y) const noexcept { return cells_[x * n_ + y]; }
  Element operator()(Element x, Element y) const noexcept { return mul(x, y); }

  /// The unique z with x*z = y.
  Element ldiv(Element x, Element y) const noexcept { return ldiv_[x * n_ + y]; }
  /// The unique z with z*x = y.
  Element rdiv(Element x, Element y) const noexcept { return rdiv_[x * n_ + y]; }

  std::span<const Element> row(Element x) const noexcept { return {cells_.data() + x * n_, n_}; }
  std::span<const Element> cells() const noexcept { return cells_; }

  Mask all() const noexcept { return full_mask(n_); }

  friend bool operator==(const LoopTable& a, const LoopTable& b) {
    return a.n_ == b.n_ && a.cells_ == b.cells_;
  }

 private:
  LoopTable(std::size_t n, std::vector<Element> cells)
      : n_(n), cells_(std::move(cells)), ldiv_(n * n), rdiv_(n * n) {
    for (std::size_t x = 0; x < n_; ++x) {
      for (std::size_t z = 0; z < n_; ++z) {
        const Element y = cells_[x * n_ + z];
        ldiv_[x * n_ + y] = static_cast<Element>(z);
        // z * x = y'  =>  rdiv(x, y') = z
        rdiv_[x * n_ + cells_[z * n_ + x]] = static_cast<Element>(z);
      }
    }
  }

  static void validate(std::size_t n, const std::vector<Element>& cells) {
    if (n == 0) throw LoopError(ErrorKind::Malformed, "order 0");
    if (n > kMaxOrder) throw LoopError(ErrorKind::OrderTooLarge, "order " + std::to_string(n));
    if (cells.size() != n * n) {
      throw LoopError(ErrorKind::Malformed, "expected " + std::to_string(n * n) + " entries, got " +
                                                std::to_string(cells.size()));
    }
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (cells[k] >= n) {
        throw LoopError(ErrorKind::Malformed, "entry " + std::to_string(cells[k]) + " at row " +
                                                  std::to_string(k / n) + " column " + std::to_string(k % n) +
                                                  " out of range");
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      Mask seen = 0;
      for (std::size_t j = 0; j < n; ++j) {
        const Element v = cells[i * n + j];
        if (seen & bit(v)) {
          throw LoopError(ErrorKind::NotLatin, "row " + std::to_string(i) + ": value " + std::to_string(v) +
                                                   " repeats");
        }
        seen |= bit(v);
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      Mask seen = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const Element v = cells[i * n + j];
        if (seen & bit(v)) {
          throw LoopError(ErrorKind::NotLatin, "column " + std::to_string(j) + ": value " +
                                                   std::to_string(v) + " repeats");
        }
        seen |= bit(v);
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (cells[i] != i) throw LoopError(ErrorKind::NoIdentity, "row 0 column " + std::to_string(i));
      if (cells[i * n] != i) throw LoopError(ErrorKind::NoIdentity, "column 0 row " + std::to_string(i));
    }
  }

  std::size_t n_;
  std::vector<Element> cells_;
  std::vector<Element> ldiv_;
  std::vector<Element> rdiv_;
};

inline Element mul(const LoopTable& q, Element x, Element y) { return q.mul(x, y); }
inline Element ldiv(const LoopTable& q, Element a, Element b) { return q.ldiv(a, b); }
inline Element rdiv(const LoopTable& q, Element a, Element b) { return q.rdiv(a, b); }

/// The unique y with x*y = e. Two-sided when the loop is commutative.
inline Element inverse(const LoopTable& q, Element x) { return q.ldiv(x, kIdentity); }

}  // namespace loopforge
