#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "loopforge/error.hpp"
#include "loopforge/loop_table.hpp"

namespace loopforge {

inline constexpr std::size_t kMaxPartialOrder = 16;

/// Per-cell candidate set during a search.
using Domain = std::uint16_t;

/// A multiplication table with holes. Each cell carries the set of values still
/// admissible for it; a filled cell's domain is the singleton of its value.
/// Placing a value strikes it from every other cell of the same row and column.
///
/// Storage is fixed-capacity so that copying a state (one copy per search
/// branch) never allocates.
class PartialTable {
 public:
  static constexpr std::int8_t kHole = -1;

  explicit PartialTable(std::size_t n) : n_(n) {
    if (n == 0 || n > kMaxPartialOrder) {
      throw LoopError(n == 0 ? ErrorKind::Malformed : ErrorKind::OrderTooLarge,
                      "partial table order " + std::to_string(n));
    }
    cells_.fill(kHole);
    row_pos_.fill(kHole);
    col_pos_.fill(kHole);
    domains_.fill(0);
    const auto all = static_cast<Domain>(full_mask(n));
    for (std::size_t k = 0; k < n * n; ++k) domains_[k] = all;
    holes_ = n * n;
  }

  /// Empty table of order n with row 0 and column 0 set to the identity.
  static PartialTable loop_skeleton(std::size_t n) {
    PartialTable p(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto e = static_cast<Element>(i);
      if (!p.place(0, e, e) || !p.place(e, 0, e)) {
        throw LoopError(ErrorKind::InconsistentPartial, "identity skeleton");
      }
    }
    return p;
  }

  static PartialTable from_table(const LoopTable& q) {
    PartialTable p(q.order());
    for (std::size_t i = 0; i < q.order(); ++i) {
      for (std::size_t j = 0; j < q.order(); ++j) {
        p.place(static_cast<Element>(i), static_cast<Element>(j), q.mul(static_cast<Element>(i), static_cast<Element>(j)));
      }
    }
    return p;
  }

  std::size_t order() const noexcept { return n_; }
  std::size_t holes() const noexcept { return holes_; }
  bool complete() const noexcept { return holes_ == 0; }

  bool filled(Element r, Element c) const noexcept { return cells_[idx(r, c)] != kHole; }
  std::int8_t raw(Element r, Element c) const noexcept { return cells_[idx(r, c)]; }
  std::optional<Element> value(Element r, Element c) const noexcept {
    const auto v = cells_[idx(r, c)];
    if (v == kHole) return std::nullopt;
    return static_cast<Element>(v);
  }
  Domain domain(Element r, Element c) const noexcept { return domains_[idx(r, c)]; }

  /// Column of row r holding value v, or -1.
  int where_in_row(Element r, Element v) const noexcept { return row_pos_[idx(r, v)]; }
  /// Row of column c holding value v, or -1.
  int where_in_col(Element c, Element v) const noexcept { return col_pos_[idx(c, v)]; }

  /// Places v at (r, c). With forward_check, v is struck from the domains of
  /// the row and column peers and false is returned if any of them empties.
  /// Always returns false if v already occurs in the row or column or is not
  /// in the cell's domain.
  bool place(Element r, Element c, Element v, bool forward_check = true) {
    const std::size_t k = idx(r, c);
    if (cells_[k] != kHole) return cells_[k] == v;
    if (row_pos_[idx(r, v)] != kHole || col_pos_[idx(c, v)] != kHole) return false;
    if (forward_check && !(domains_[k] & bit(v))) return false;
    cells_[k] = static_cast<std::int8_t>(v);
    domains_[k] = static_cast<Domain>(bit(v));
    row_pos_[idx(r, v)] = static_cast<std::int8_t>(c);
    col_pos_[idx(c, v)] = static_cast<std::int8_t>(r);
    --holes_;
    if (!forward_check) return true;
    const auto strike = static_cast<Domain>(~bit(v));
    bool ok = true;
    for (std::size_t j = 0; j < n_; ++j) {
      const std::size_t kr = r * n_ + j;
      if (cells_[kr] == kHole) {
        domains_[kr] &= strike;
        ok = ok && domains_[kr] != 0;
      }
      const std::size_t kc = j * n_ + c;
      if (cells_[kc] == kHole) {
        domains_[kc] &= strike;
        ok = ok && domains_[kc] != 0;
      }
    }
    return ok;
  }

  /// Removes v from the candidates of a hole. Returns false if the domain empties.
  bool remove(Element r, Element c, Element v) noexcept {
    const std::size_t k = idx(r, c);
    if (cells_[k] != kHole) return cells_[k] != v;
    domains_[k] &= static_cast<Domain>(~bit(v));
    return domains_[k] != 0;
  }

  /// Converts a complete table; throws the LoopTable validation errors.
  LoopTable to_loop() const {
    if (!complete()) {
      throw LoopError(ErrorKind::InconsistentPartial, std::to_string(holes_) + " holes remain");
    }
    std::vector<Element> cells(n_ * n_);
    for (std::size_t k = 0; k < n_ * n_; ++k) cells[k] = static_cast<Element>(cells_[k]);
    return LoopTable::from_cells(n_, std::move(cells));
  }

  friend bool operator==(const PartialTable& a, const PartialTable& b) {
    if (a.n_ != b.n_) return false;
    for (std::size_t k = 0; k < a.n_ * a.n_; ++k) {
      if (a.cells_[k] != b.cells_[k]) return false;
    }
    return true;
  }

 private:
  std::size_t idx(std::size_t r, std::size_t c) const noexcept { return r * n_ + c; }

  static constexpr std::size_t kCap = kMaxPartialOrder * kMaxPartialOrder;

  std::size_t n_;
  std::size_t holes_ = 0;
  std::array<std::int8_t, kCap> cells_{};
  std::array<std::int8_t, kCap> row_pos_{};
  std::array<std::int8_t, kCap> col_pos_{};
  std::array<Domain, kCap> domains_{};
};

}  // namespace loopforge
