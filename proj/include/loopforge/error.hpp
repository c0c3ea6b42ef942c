#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace loopforge {

enum class ErrorKind {
  Malformed,
  NotLatin,
  NoIdentity,
  OrderTooLarge,
  NoSquareRoot,
  NotCommutative,
  NotJordan,
  InvalidConfig,
  InconsistentPartial,
  CertificationFailed,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Malformed: return "Malformed";
    case ErrorKind::NotLatin: return "NotLatin";
    case ErrorKind::NoIdentity: return "NoIdentity";
    case ErrorKind::OrderTooLarge: return "OrderTooLarge";
    case ErrorKind::NoSquareRoot: return "NoSquareRoot";
    case ErrorKind::NotCommutative: return "NotCommutative";
    case ErrorKind::NotJordan: return "NotJordan";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::InconsistentPartial: return "InconsistentPartial";
    case ErrorKind::CertificationFailed: return "CertificationFailed";
  }
  return "Unknown";
}

/// Every failure raised by the library. what() starts with the kind name,
/// e.g. "NotLatin row 1: value 7 repeats".
class LoopError : public std::runtime_error {
 public:
  LoopError(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + (detail.empty() ? "" : " " + detail)),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace loopforge
