#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace sudler {

using BigInt = boost::multiprecision::cpp_int;
using HighFloat = boost::multiprecision::cpp_bin_float_50;

// A real value with a bound on its absolute error. `zero` marks values that
// are exactly zero (vanishing factor) or indistinguishable from zero within
// the bound (evaluation at a root).
struct EvalWithBound {
    double value = 0.0;
    double abs_err = 0.0;
    bool zero = false;

    double lo() const { return value - abs_err; }
    double hi() const { return value + abs_err; }
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Precondition violated by the caller.
class DomainError : public Error {
public:
    using Error::Error;
};

class DigitRuleError : public DomainError {
public:
    DigitRuleError(int rule, const std::string& what) : DomainError(what), rule_(rule) {}
    int rule() const { return rule_; }

private:
    int rule_;
};

// Evaluation point sits on (or within error of) a zero of the limit function.
class RootError : public DomainError {
public:
    using DomainError::DomainError;
};

class FactorizationError : public DomainError {
public:
    using DomainError::DomainError;
};

// Requested work exceeds the configured evaluation budget.
class BudgetError : public Error {
public:
    using Error::Error;
};

}  // namespace sudler
