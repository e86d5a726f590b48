#pragma once

#include <stdexcept>
#include <string>

namespace fracfn {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad arguments: the caller asked for something outside a documented domain.
class ValidationError : public Error {
public:
    using Error::Error;
};

// The arguments are valid but the numerics could not deliver.
class NumericalError : public Error {
public:
    using Error::Error;
};

#define FRACFN_ERROR(Name, Base)               \
    class Name : public Base {                 \
    public:                                    \
        using Base::Base;                      \
    };

FRACFN_ERROR(DomainError, ValidationError)
FRACFN_ERROR(PoleError, ValidationError)
FRACFN_ERROR(NonUniformGrid, ValidationError)
FRACFN_ERROR(DiamondViolation, ValidationError)
FRACFN_ERROR(UnsupportedNu, ValidationError)
FRACFN_ERROR(WrongInitialCount, ValidationError)
FRACFN_ERROR(StrategyUnsupported, ValidationError)
FRACFN_ERROR(OutOfRange, ValidationError)
FRACFN_ERROR(OutOfAsymptoticRange, ValidationError)
FRACFN_ERROR(UnsupportedRegime, ValidationError)

FRACFN_ERROR(NonConvergence, NumericalError)
FRACFN_ERROR(DecayMismatch, NumericalError)
FRACFN_ERROR(NoSignChange, NumericalError)
FRACFN_ERROR(SeriesDivergence, NumericalError)
FRACFN_ERROR(CancellationError, NumericalError)
FRACFN_ERROR(HorizonTooSmall, NumericalError)

#undef FRACFN_ERROR

// A distribution that is a point mass: there is no density to return.
class SingularCase : public ValidationError {
public:
    SingularCase(const std::string& what, double location) : ValidationError(what), location_(location) {}
    double location() const { return location_; }

private:
    double location_;
};

inline void require_finite(double x, const char* what)
{
    if (!(x - x == 0.0)) throw DomainError(std::string(what) + " must be finite");
}

} // namespace fracfn
