#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "loopforge/algebra.hpp"
#include "loopforge/error.hpp"
#include "loopforge/loop_table.hpp"
#include "loopforge/powers.hpp"

namespace loopforge {

/// The checkable statements. Powers are right-associated, negative exponents
/// are powers of the inverse.
enum class IdentityId : int {
  Jordan,                 // x^2(yx) = (x^2 y)x for all x, y
  SmallPowers,            // x^3, x^4, x^5 well-defined
  Shift2,                 // x^n x^2 = x^{n+2}
  Shift4,                 // x^n x^4 = x^{n+4}
  Shift8,                 // x^n x^8 = x^{n+8}, n != 3 mod 4
  Shift8AllN,             // x^n x^8 = x^{n+8}, n = 3 mod 4, given x^3 x^8 = x^11
  ShiftPow2,              // x^n x^{2^k} = x^{n+2^k} when n = 2^m mod 2^{k-1}, some m < k
  SquarePow2,             // x^{2^m} = (x^{2^{m-1}})^2
  BinaryExpansion,        // x^n as a right-nested product over the binary digits of n
  SquareTimesInverse,     // x^2 x^{-1} = x
  FourthTimesInverse,     // x^4 x^{-1} = x^3
  EighthTimesInverse,     // x^8 x^{-1} = x^7, given x^3 x^8 = x^11
  InversePow2,            // (x^{2^k})^{-1} = (x^{-1})^{2^k}
  InvSquareTimesX,        // (x^2)^{-1} x = x^{-1}
  CubeTimesNeg2,          // x^3 x^{-2} = x
  CubeTimesInverse,       // x^3 x^{-1} = x^2
  FourthTimesInvCube,     // x^4 (x^{-1})^3 = x
  SixthTimesNeg2,         // x^6 x^{-2} = x^4
  SixthTimesNeg4,         // x^6 x^{-4} = x^2
  SixthTimesNeg2ViaSquare,  // (x^2)^3 (x^2)^{-1} = (x^2)^2
  SixthTimesNeg4ViaSquare,  // (x^2)^3 ((x^2)^2)^{-1} = x^2
  CubeSquareConsequences, // x^3 x^3 = x^6  =>  x^6, x^7, x^8 well-defined and x^6 x^{-1} = x^5
  InvolutionParity,       // nontrivial involution exists iff n even
  EvenSubloopParity,      // even-ordered subloop exists iff n even
  SquareRootParity,       // squaring is a bijection iff n odd
  SubloopHalfBound,       // proper subloops have size <= floor(n/2)
  MonogenicCyclic,        // all x^m well-defined for m < n  =>  <x> cyclic group, k > n/2 => k = n
};

inline constexpr int kIdentityCount = static_cast<int>(IdentityId::MonogenicCyclic) + 1;

constexpr std::string_view to_string(IdentityId id) {
  constexpr std::array<std::string_view, kIdentityCount> names = {
      "jordan",          "small-powers",     "shift-2",          "shift-4",
      "shift-8",         "shift-8-all-n",    "shift-2^k",        "square-2^k",
      "binary-expansion", "x2.xinv",         "x4.xinv",          "x8.xinv",
      "inverse-2^k",     "inv(x2).x",        "x3.x-2",           "x3.xinv",
      "x4.xinv3",        "x6.x-2",           "x6.x-4",           "x6.x-2-via-square",
      "x6.x-4-via-square", "x3x3-consequences", "involution-parity", "even-subloop-parity",
      "square-root-parity", "subloop-half-bound", "monogenic-cyclic",
  };
  return names[static_cast<int>(id)];
}

inline std::optional<IdentityId> identity_from_string(std::string_view name) {
  for (int i = 0; i < kIdentityCount; ++i) {
    if (to_string(static_cast<IdentityId>(i)) == name) return static_cast<IdentityId>(i);
  }
  return std::nullopt;
}

enum class Status { Pass, Fail, NotApplicable };

constexpr std::string_view to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::NotApplicable: return "not-applicable";
  }
  return "?";
}

/// One failing instance. `args` are the exponents of the instance (for
/// table-level statements, the extra operands); lhs and rhs are the two sides
/// that differed.
struct Witness {
  std::optional<Element> element;
  std::vector<std::int64_t> args;
  std::int64_t lhs = 0;
  std::int64_t rhs = 0;
};

struct LemmaReport {
  IdentityId id = IdentityId::Jordan;
  std::optional<Element> element;
  Status status = Status::NotApplicable;
  std::optional<Witness> witness;
  std::size_t instances = 0;
};

/// Both sides of one instance of `id`. Every check is a loop over instances
/// of this function, so re-evaluating a witness reproduces it exactly.
inline std::pair<std::int64_t, std::int64_t> evaluate_instance(const LoopTable& q, IdentityId id,
                                                              std::optional<Element> element,
                                                              std::span<const std::int64_t> args) {
  const Element x = element.value_or(kIdentity);
  auto p = [&](std::int64_t k) { return rpow(q, x, k); };
  auto m = [&](Element a, Element b) { return q.mul(a, b); };
  const Element inv = inverse(q, x);
  auto pair = [](auto a, auto b) { return std::pair<std::int64_t, std::int64_t>{a, b}; };
  auto well_defined = [&](int k) {
    const auto prof = power_profile(q, x, k);
    Element other = prof.rpow[k];
    for_each_bit(prof.bracket_sets[k], [&](Element v) {
      if (other == prof.rpow[k] && v != prof.rpow[k]) other = v;
    });
    return pair(prof.rpow[k], other);
  };
  const std::size_t n = q.order();
  switch (id) {
    case IdentityId::Jordan: {
      const auto y = static_cast<Element>(args[0]);
      const Element sq = m(x, x);
      return pair(m(sq, m(y, x)), m(m(sq, y), x));
    }
    case IdentityId::SmallPowers: return well_defined(static_cast<int>(args[0]));
    case IdentityId::Shift2: return pair(m(p(args[0]), p(2)), p(args[0] + 2));
    case IdentityId::Shift4: return pair(m(p(args[0]), p(4)), p(args[0] + 4));
    case IdentityId::Shift8:
    case IdentityId::Shift8AllN: return pair(m(p(args[0]), p(8)), p(args[0] + 8));
    case IdentityId::ShiftPow2: {
      const std::int64_t step = std::int64_t{1} << args[1];
      return pair(m(p(args[0]), p(step)), p(args[0] + step));
    }
    case IdentityId::SquarePow2: {
      const Element half = p(std::int64_t{1} << (args[0] - 1));
      return pair(p(std::int64_t{1} << args[0]), m(half, half));
    }
    case IdentityId::BinaryExpansion:
      return pair(binary_expansion_power(q, x, static_cast<std::uint64_t>(args[0])), p(args[0]));
    case IdentityId::SquareTimesInverse: return pair(m(p(2), inv), x);
    case IdentityId::FourthTimesInverse: return pair(m(p(4), inv), p(3));
    case IdentityId::EighthTimesInverse: return pair(m(p(8), inv), p(7));
    case IdentityId::InversePow2: {
      const std::int64_t e = std::int64_t{1} << args[0];
      return pair(inverse(q, p(e)), rpow(q, inv, e));
    }
    case IdentityId::InvSquareTimesX: return pair(m(inverse(q, p(2)), x), inv);
    case IdentityId::CubeTimesNeg2: return pair(m(p(3), p(-2)), x);
    case IdentityId::CubeTimesInverse: return pair(m(p(3), inv), p(2));
    case IdentityId::FourthTimesInvCube: return pair(m(p(4), rpow(q, inv, 3)), x);
    case IdentityId::SixthTimesNeg2: return pair(m(p(6), p(-2)), p(4));
    case IdentityId::SixthTimesNeg4: return pair(m(p(6), p(-4)), p(2));
    case IdentityId::SixthTimesNeg2ViaSquare: {
      const Element y = p(2);
      return pair(m(rpow(q, y, 3), inverse(q, y)), rpow(q, y, 2));
    }
    case IdentityId::SixthTimesNeg4ViaSquare: {
      const Element y = p(2);
      return pair(m(rpow(q, y, 3), inverse(q, rpow(q, y, 2))), y);
    }
    case IdentityId::CubeSquareConsequences:
      if (args.size() == 1) return well_defined(static_cast<int>(args[0]));
      return pair(m(p(6), inv), p(5));
    case IdentityId::InvolutionParity: return pair(has_nontrivial_involution(q), n % 2 == 0);
    case IdentityId::EvenSubloopParity: {
      bool even = false;
      for (const auto& h : all_subloops(q)) even = even || h.size() % 2 == 0;
      return pair(even, n % 2 == 0);
    }
    case IdentityId::SquareRootParity: {
      bool ok = true;
      try {
        (void)square_root_map(q);
      } catch (const LoopError&) {
        ok = false;
      }
      return pair(ok, n % 2 == 1);
    }
    case IdentityId::SubloopHalfBound: {
      const auto size = static_cast<std::size_t>(popcount(static_cast<Mask>(args[0])));
      return pair(size <= n / 2, true);
    }
    case IdentityId::MonogenicCyclic: {
      const Mask h = closure(q, bit(x));
      const auto k = static_cast<std::size_t>(popcount(h));
      switch (args[0]) {
        case 0: {  // <x> is a commutative group
          bool comm = true;
          for_each_bit(h, [&](Element a) { for_each_bit(h, [&](Element b) { comm = comm && m(a, b) == m(b, a); }); });
          return pair(comm && !associativity_violation(q, h), true);
        }
        case 1: {  // powers x^0..x^{k-1} are distinct, exhaust <x>, and x^k = e
          Mask powers = 0;
          for (std::size_t i = 0; i < k; ++i) powers |= bit(p(static_cast<std::int64_t>(i)));
          return pair(powers == h && p(static_cast<std::int64_t>(k)) == kIdentity, true);
        }
        default: return pair(k <= n / 2 || k == n, true);
      }
    }
  }
  return pair(0, 0);
}

namespace detail {

inline LemmaReport run_instances(const LoopTable& q, IdentityId id, std::optional<Element> element,
                                 const std::vector<std::vector<std::int64_t>>& instances) {
  LemmaReport r;
  r.id = id;
  r.element = element;
  r.instances = instances.size();
  if (instances.empty()) return r;
  r.status = Status::Pass;
  for (const auto& args : instances) {
    const auto [lhs, rhs] = evaluate_instance(q, id, element, args);
    if (lhs != rhs) {
      r.status = Status::Fail;
      r.witness = Witness{element, args, lhs, rhs};
      break;
    }
  }
  return r;
}

inline void require_jordan(const LoopTable& q) {
  if (!is_commutative(q)) throw LoopError(ErrorKind::NotJordan, "loop is not commutative");
  if (const auto v = jordan_violation(q)) {
    throw LoopError(ErrorKind::NotJordan, "x=" + std::to_string((*v).first) + " y=" + std::to_string((*v).second));
  }
}

inline bool cube_eighth_hypothesis(const LoopTable& q, Element x) {
  return q.mul(rpow(q, x, 3), rpow(q, x, 8)) == rpow(q, x, 11);
}

inline std::vector<LemmaReport> power2_unchecked(const LoopTable& q, Element x, int max_n) {
  using Args = std::vector<std::vector<std::int64_t>>;
  Args shift2, shift4, shift8, shift8_all, shift_pow2, square_pow2;
  for (std::int64_t n = 0; n <= max_n; ++n) {
    shift2.push_back({n});
    shift4.push_back({n});
    if (n % 4 != 3) shift8.push_back({n});
  }
  if (cube_eighth_hypothesis(q, x)) {
    for (std::int64_t n = 3; n <= max_n; n += 4) shift8_all.push_back({n});
  }
  for (std::int64_t k = 1; (std::int64_t{1} << k) <= max_n; ++k) {
    const std::int64_t step = std::int64_t{1} << k;
    const std::int64_t modulus = std::int64_t{1} << (k - 1);
    for (std::int64_t n = 0; n + step <= max_n; ++n) {
      bool hyp = false;
      for (std::int64_t e = 0; e <= k - 1; ++e) hyp = hyp || (n - (std::int64_t{1} << e)) % modulus == 0;
      if (hyp) shift_pow2.push_back({n, k});
    }
  }
  for (std::int64_t e = 1; (std::int64_t{1} << e) <= max_n; ++e) square_pow2.push_back({e});
  return {
      run_instances(q, IdentityId::Shift2, x, shift2),
      run_instances(q, IdentityId::Shift4, x, shift4),
      run_instances(q, IdentityId::Shift8, x, shift8),
      run_instances(q, IdentityId::Shift8AllN, x, shift8_all),
      run_instances(q, IdentityId::ShiftPow2, x, shift_pow2),
      run_instances(q, IdentityId::SquarePow2, x, square_pow2),
  };
}

inline std::vector<LemmaReport> inverse_identities_unchecked(const LoopTable& q, Element x) {
  std::vector<std::vector<std::int64_t>> conditional;
  if (cube_eighth_hypothesis(q, x)) conditional.push_back({});
  return {
      run_instances(q, IdentityId::SquareTimesInverse, x, {{}}),
      run_instances(q, IdentityId::FourthTimesInverse, x, {{}}),
      run_instances(q, IdentityId::EighthTimesInverse, x, conditional),
  };
}

inline LemmaReport inverse_power2_unchecked(const LoopTable& q, Element x, int max_k) {
  std::vector<std::vector<std::int64_t>> args;
  for (std::int64_t k = 0; k <= max_k; ++k) args.push_back({k});
  return run_instances(q, IdentityId::InversePow2, x, args);
}

inline std::vector<LemmaReport> identities2_unchecked(const LoopTable& q, Element x) {
  std::vector<LemmaReport> out;
  for (const auto id : {IdentityId::InvSquareTimesX, IdentityId::CubeTimesNeg2, IdentityId::CubeTimesInverse,
                        IdentityId::FourthTimesInvCube, IdentityId::SixthTimesNeg2, IdentityId::SixthTimesNeg4,
                        IdentityId::SixthTimesNeg2ViaSquare, IdentityId::SixthTimesNeg4ViaSquare}) {
    out.push_back(run_instances(q, id, x, {{}}));
  }
  return out;
}

inline LemmaReport cube_square_unchecked(const LoopTable& q, Element x) {
  std::vector<std::vector<std::int64_t>> args;
  if (q.mul(rpow(q, x, 3), rpow(q, x, 3)) == rpow(q, x, 6)) args = {{6}, {7}, {8}, {6, -1}};
  return run_instances(q, IdentityId::CubeSquareConsequences, x, args);
}

inline std::vector<std::vector<std::int64_t>> binary_range(int max_n) {
  std::vector<std::vector<std::int64_t>> args;
  for (std::int64_t n = 1; n <= max_n; ++n) args.push_back({n});
  return args;
}

inline int max_power_of_two_exponent(int max_n) {
  int k = 0;
  while ((std::int64_t{1} << (k + 1)) <= max_n) ++k;
  return k;
}

}  // namespace detail

/// x^2(yx) = (x^2 y)x over all n^2 pairs; the witness element is x and args = {y}.
inline LemmaReport check_jordan_pairs(const LoopTable& q) {
  LemmaReport r;
  r.id = IdentityId::Jordan;
  r.instances = q.order() * q.order();
  r.status = Status::Pass;
  if (const auto v = jordan_violation(q)) {
    const auto [x, y] = *v;
    const auto [lhs, rhs] = evaluate_instance(q, IdentityId::Jordan, x, std::array<std::int64_t, 1>{y});
    r.status = Status::Fail;
    r.witness = Witness{x, {y}, lhs, rhs};
  }
  return r;
}

/// x^3, x^4 and x^5 are well-defined.
inline LemmaReport check_small_powers(const LoopTable& q, Element x) {
  detail::require_jordan(q);
  return detail::run_instances(q, IdentityId::SmallPowers, x, {{3}, {4}, {5}});
}

/// The multiplication-by-powers-of-two identities. Returns, in order:
/// shift-2, shift-4, shift-8, shift-8-all-n, shift-2^k, square-2^k.
inline std::vector<LemmaReport> check_power2(const LoopTable& q, Element x, int max_n) {
  detail::require_jordan(q);
  return detail::power2_unchecked(q, x, max_n);
}

inline LemmaReport check_binary_expansion(const LoopTable& q, Element x, std::int64_t n) {
  detail::require_jordan(q);
  return detail::run_instances(q, IdentityId::BinaryExpansion, x, {{n}});
}

/// x^2 x^{-1} = x, x^4 x^{-1} = x^3, and (when x^3 x^8 = x^11) x^8 x^{-1} = x^7.
inline std::vector<LemmaReport> check_inverse_identities(const LoopTable& q, Element x) {
  detail::require_jordan(q);
  return detail::inverse_identities_unchecked(q, x);
}

inline LemmaReport check_inverse_power2(const LoopTable& q, Element x, int max_k) {
  detail::require_jordan(q);
  return detail::inverse_power2_unchecked(q, x, max_k);
}

/// The six mixed power/inverse identities plus the two forms of the sixth-power
/// ones evaluated on the base x^2.
inline std::vector<LemmaReport> check_identities2(const LoopTable& q, Element x) {
  detail::require_jordan(q);
  return detail::identities2_unchecked(q, x);
}

/// When x^3 x^3 = x^6: x^6, x^7, x^8 are well-defined and x^6 x^{-1} = x^5.
/// Not applicable otherwise.
inline LemmaReport check_8welldefined(const LoopTable& q, Element x) {
  detail::require_jordan(q);
  return detail::cube_square_unchecked(q, x);
}

/// When every x^m with m < n is well-defined, <x> must be a cyclic group whose
/// order k is n whenever k > n/2. Applies to any loop.
inline LemmaReport check_monogenic_lemma(const LoopTable& q, Element x) {
  const std::size_t n = q.order();
  const int top = std::max<int>(1, static_cast<int>(n) - 1);
  const auto prof = power_profile(q, x, top);
  bool hyp = true;
  for (int m = 1; m <= top && m < static_cast<int>(n); ++m) hyp = hyp && prof.well_defined[m];
  if (!hyp) return detail::run_instances(q, IdentityId::MonogenicCyclic, x, {});
  return detail::run_instances(q, IdentityId::MonogenicCyclic, x, {{0}, {1}, {2}});
}

/// Table-level parity and size statements for commutative loops.
inline std::vector<LemmaReport> check_structure(const LoopTable& q) {
  std::vector<LemmaReport> out;
  out.push_back(detail::run_instances(q, IdentityId::InvolutionParity, std::nullopt, {{}}));
  out.push_back(detail::run_instances(q, IdentityId::SquareRootParity, std::nullopt, {{}}));
  if (q.order() <= kDefaultSubloopOrderBound) {
    out.push_back(detail::run_instances(q, IdentityId::EvenSubloopParity, std::nullopt, {{}}));
    std::vector<std::vector<std::int64_t>> proper;
    for (const auto& h : all_subloops(q)) {
      if (h.carrier != q.all()) proper.push_back({static_cast<std::int64_t>(h.carrier)});
    }
    out.push_back(detail::run_instances(q, IdentityId::SubloopHalfBound, std::nullopt, proper));
  } else {
    out.push_back(detail::run_instances(q, IdentityId::EvenSubloopParity, std::nullopt, {}));
    out.push_back(detail::run_instances(q, IdentityId::SubloopHalfBound, std::nullopt, {}));
  }
  return out;
}

/// Every statement for every element, sorted by identity and then element.
/// The power identities are reported once, without an element, as
/// not-applicable when the loop is commutative but not Jordan.
inline std::vector<LemmaReport> run_full_suite(const LoopTable& q, int max_n) {
  if (!is_commutative(q)) throw LoopError(ErrorKind::NotCommutative, "identity suite needs a commutative loop");
  std::vector<LemmaReport> out;
  out.push_back(check_jordan_pairs(q));
  const bool jordan = out.back().status == Status::Pass;
  const std::size_t n = q.order();
  if (jordan) {
    const int max_k = detail::max_power_of_two_exponent(max_n);
    for (std::size_t xi = 0; xi < n; ++xi) {
      const auto x = static_cast<Element>(xi);
      out.push_back(detail::run_instances(q, IdentityId::SmallPowers, x, {{3}, {4}, {5}}));
      for (auto& r : detail::power2_unchecked(q, x, max_n)) out.push_back(std::move(r));
      out.push_back(detail::run_instances(q, IdentityId::BinaryExpansion, x, detail::binary_range(max_n)));
      for (auto& r : detail::inverse_identities_unchecked(q, x)) out.push_back(std::move(r));
      out.push_back(detail::inverse_power2_unchecked(q, x, max_k));
      for (auto& r : detail::identities2_unchecked(q, x)) out.push_back(std::move(r));
      out.push_back(detail::cube_square_unchecked(q, x));
    }
  } else {
    for (int id = static_cast<int>(IdentityId::SmallPowers); id <= static_cast<int>(IdentityId::CubeSquareConsequences);
         ++id) {
      out.push_back(detail::run_instances(q, static_cast<IdentityId>(id), std::nullopt, {}));
    }
  }
  for (auto& r : check_structure(q)) out.push_back(std::move(r));
  for (std::size_t xi = 0; xi < n; ++xi) out.push_back(check_monogenic_lemma(q, static_cast<Element>(xi)));

  std::stable_sort(out.begin(), out.end(), [](const LemmaReport& a, const LemmaReport& b) {
    if (a.id != b.id) return a.id < b.id;
    const int ea = a.element ? *a.element : -1;
    const int eb = b.element ? *b.element : -1;
    return ea < eb;
  });
  return out;
}

inline std::vector<LemmaReport> run_full_suite(const LoopTable& q) { return run_full_suite(q, default_max_exp(q.order())); }

inline bool any_failed(std::span<const LemmaReport> reports) {
  return std::any_of(reports.begin(), reports.end(), [](const LemmaReport& r) { return r.status == Status::Fail; });
}

/// One line per report:
///   <id> <element|-> <status> instances=<k>[ witness x=<e> args=<a,...> lhs=<l> rhs=<r>]
inline std::string format_report_line(const LemmaReport& r) {
  std::string line = std::string(to_string(r.id)) + " " + (r.element ? std::to_string(*r.element) : "-") + " " +
                     std::string(to_string(r.status)) + " instances=" + std::to_string(r.instances);
  if (r.witness) {
    const auto& w = *r.witness;
    line += " witness x=" + (w.element ? std::to_string(*w.element) : std::string("-")) + " args=";
    for (std::size_t i = 0; i < w.args.size(); ++i) line += (i ? "," : "") + std::to_string(w.args[i]);
    if (w.args.empty()) line += "-";
    line += " lhs=" + std::to_string(w.lhs) + " rhs=" + std::to_string(w.rhs);
  }
  return line;
}

inline std::string format_reports(std::span<const LemmaReport> reports) {
  std::string out;
  for (const auto& r : reports) out += format_report_line(r) + "\n";
  return out;
}

inline nlohmann::json report_to_json(const LemmaReport& r) {
  nlohmann::json j = {{"id", std::string(to_string(r.id))},
                      {"element", r.element ? nlohmann::json(*r.element) : nlohmann::json(nullptr)},
                      {"status", std::string(to_string(r.status))},
                      {"instances", r.instances}};
  if (r.witness) {
    const auto& w = *r.witness;
    j["witness"] = {{"element", w.element ? nlohmann::json(*w.element) : nlohmann::json(nullptr)},
                    {"args", w.args},
                    {"lhs", w.lhs},
                    {"rhs", w.rhs}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

/// {"schema": 1, "reports": [...]}
inline nlohmann::json reports_to_json(std::span<const LemmaReport> reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) arr.push_back(report_to_json(r));
  return {{"schema", 1}, {"reports", arr}};
}

}  // namespace loopforge
