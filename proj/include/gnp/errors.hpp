#pragma once

#include <stdexcept>
#include <string>

namespace gnp {

/// An input violates a mathematical hypothesis (coprimality, prime bounds,
/// residue class). The CLI maps this to exit code 2.
class HypothesisError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Work would exceed the configured evaluation budget (exit code 3).
class BudgetError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// An identity that must hold by construction failed (exit code 4).
class ConsistencyError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

/// A truncated p-adic computation cannot certify its answer.
class PrecisionError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw HypothesisError(what);
}

}  // namespace gnp
