#pragma once

#include <stdexcept>
#include <string>

#include "dedekind/interval.hpp"

namespace dedekind {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A separation certificate |x| >= sep could not be confirmed.
class NotSeparatedFromZero : public Error {
 public:
  using Error::Error;
};

/// A base-gamma operation could not certify |gamma - 1| >= sep_one.
class NotSeparatedFromOne : public Error {
 public:
  using Error::Error;
};

/// Carrier endpoints were certified to be in the wrong order (y < x).
class InvalidIntervalOrder : public Error {
 public:
  using Error::Error;
};

/// The top level r_n of an upper sum does not clear the integrand.
class LevelsTooLow : public Error {
 public:
  using Error::Error;
};

/// A function was applied outside the region where it is certified to exist.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Refinement ran out of budget before reaching the requested tolerance.
/// `best` is still a sound enclosure, only wider than asked for.
class BudgetExhausted : public Error {
 public:
  BudgetExhausted(const std::string& what, RatInterval best)
      : Error(what), best_(std::move(best)) {}

  const RatInterval& best() const { return best_; }

 private:
  RatInterval best_;
};

}  // namespace dedekind
