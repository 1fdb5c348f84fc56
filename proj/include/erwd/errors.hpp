#pragma once

#include <stdexcept>
#include <string>

namespace erwd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter lies outside the domain where the model or formula is defined.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A Green's function convolution power or geometric series that does not converge.
class DivergenceError : public DomainError {
public:
    using DomainError::DomainError;
};

/// The requested computation exceeds its work budget.
class BudgetError : public Error {
public:
    using Error::Error;
};

/// A numerical routine could not reach its accuracy target.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double achieved)
        : Error(what), achieved_(achieved) {}

    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

}  // namespace erwd
