#include "ckrlie/errors.hpp"

#include <cstdio>

namespace ckrlie {
namespace {

std::string format_x(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

ParseError::ParseError(std::string message, std::size_t offset)
    : Error(message + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}

std::string_view to_string(DomainKind kind) noexcept {
  switch (kind) {
    case DomainKind::kLogNonPositive:
      return "log of non-positive argument";
    case DomainKind::kSqrtNegative:
      return "sqrt of negative argument";
    case DomainKind::kDivisionByZero:
      return "division by zero";
    case DomainKind::kPowUndefined:
      return "power undefined";
    case DomainKind::kNonFinite:
      return "non-finite value";
    case DomainKind::kChartAxis:
      return "point on the p1 = 0 axis";
    case DomainKind::kOutOfRange:
      return "abscissa outside sampled range";
  }
  return "unknown domain error";
}

DomainError::DomainError(DomainKind kind, double x)
    : Error(std::string(to_string(kind)) + " at x = " + format_x(x)), kind_(kind), x_(x) {}

DomainError::DomainError(DomainKind kind, double x, std::string_view detail)
    : Error(std::string(to_string(kind)) + " at x = " + format_x(x) + ": " + std::string(detail)),
      kind_(kind),
      x_(x) {}

ValidationError::ValidationError(std::string invariant, std::string_view detail)
    : Error(invariant + ": " + std::string(detail)), invariant_(std::move(invariant)) {}

NumericalError::NumericalError(std::string_view what, double x)
    : Error(std::string(what) + " at x = " + format_x(x)), x_(x) {}

}  // namespace ckrlie
