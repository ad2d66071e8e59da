#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace ergolab {

// Mismatched element kinds, bad lengths, missing table entries.
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Argument outside the domain of a formula (eps, p, K, eta preconditions).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Non-finite or malformed numeric data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

class ModulusNotFound : public std::runtime_error {
 public:
  // last_violation is the largest m in the window where some g in F_n broke
  // the ratio condition; a certified N would have to exceed it.
  ModulusNotFound(std::int64_t n, std::int64_t m_max, std::int64_t last_violation)
      : std::runtime_error("modulus not found in window: n=" + std::to_string(n) +
                           ", window end=" + std::to_string(m_max) +
                           ", last violating m=" + std::to_string(last_violation)),
        n_(n),
        m_max_(m_max),
        last_violation_(last_violation) {}

  std::int64_t n() const noexcept { return n_; }
  std::int64_t window_end() const noexcept { return m_max_; }
  std::int64_t last_violation() const noexcept { return last_violation_; }

 private:
  std::int64_t n_;
  std::int64_t m_max_;
  std::int64_t last_violation_;
};

class BudgetExhausted : public std::runtime_error {
 public:
  BudgetExhausted(std::size_t stage, std::size_t budget)
      : std::runtime_error("construction budget exhausted at stage " + std::to_string(stage) +
                           " after " + std::to_string(budget) + " candidates"),
        stage_(stage) {}
  std::size_t stage() const noexcept { return stage_; }

 private:
  std::size_t stage_;
};

class RefinementExhausted : public std::runtime_error {
 public:
  RefinementExhausted(std::size_t found, std::size_t wanted)
      : std::runtime_error("refinement window exhausted: found " + std::to_string(found) +
                           " of " + std::to_string(wanted) + " terms"),
        found_(found) {}
  std::size_t found() const noexcept { return found_; }

 private:
  std::size_t found_;
};

// Verification asked to run against a modulus that does not cover the window.
class UncertifiedWindow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ergolab
