/**
 * @file errors.hpp
 * @brief Exception hierarchy shared by every ckrlie module.
 */
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ckrlie {

/** @brief Base class of all library errors. */
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/** @brief Malformed expression text; `offset()` is the byte offset of the offending token. */
class ParseError : public Error {
 public:
  ParseError(std::string message, std::size_t offset);
  [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

enum class DomainKind {
  kLogNonPositive,
  kSqrtNegative,
  kDivisionByZero,
  kPowUndefined,
  kNonFinite,
  kChartAxis,
  kOutOfRange,
};

[[nodiscard]] std::string_view to_string(DomainKind kind) noexcept;

/** @brief A function was evaluated outside its admissible domain at abscissa `x()`. */
class DomainError : public Error {
 public:
  DomainError(DomainKind kind, double x);
  DomainError(DomainKind kind, double x, std::string_view detail);
  [[nodiscard]] DomainKind kind() const noexcept { return kind_; }
  [[nodiscard]] double x() const noexcept { return x_; }

 private:
  DomainKind kind_;
  double x_;
};

/** @brief A documented invariant of an input was violated. `invariant()` names it. */
class ValidationError : public Error {
 public:
  ValidationError(std::string invariant, std::string_view detail);
  [[nodiscard]] const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

/** @brief A numerical procedure failed (integrator exhaustion, non-convergence). */
class NumericalError : public Error {
 public:
  NumericalError(std::string_view what, double x);
  [[nodiscard]] double x() const noexcept { return x_; }

 private:
  double x_;
};

}  // namespace ckrlie
