// errors.hpp
// ----------
// Exception hierarchy for the sfreg library.  Every domain failure carries a
// stable machine-readable kind string (used verbatim in CLI error reports)
// plus a human-readable message.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sfreg {

class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    [[nodiscard]] const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

// Text could not be parsed; `offset` is the byte position of the failure.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, const std::string& message)
        : Error("ParseError", message + " (byte " + std::to_string(offset) + ")"),
          offset_(offset) {}

    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

// An identifier in an expression is not among the declared variables.
class UnknownVariable : public Error {
public:
    UnknownVariable(std::size_t offset, const std::string& name)
        : Error("UnknownVariable",
                "unknown variable '" + name + "' (byte " + std::to_string(offset) + ")"),
          offset_(offset) {}

    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

// The expression is not a polynomial (contains exp, or a non-constant divisor).
struct NotPolynomial : Error {
    explicit NotPolynomial(const std::string& m) : Error("NotPolynomial", m) {}
};

// Evaluation hit a singular operation (zero divisor at the evaluation point).
struct EvaluationSingular : Error {
    explicit EvaluationSingular(const std::string& m) : Error("EvaluationSingular", m) {}
};

// Root isolation was asked for the zero polynomial.
struct IdenticallyZero : Error {
    explicit IdenticallyZero(const std::string& m) : Error("IdenticallyZero", m) {}
};

// The constraint matrix of a transition-function synthesis is singular.
struct SingularConstraintMatrix : Error {
    explicit SingularConstraintMatrix(const std::string& m)
        : Error("SingularConstraintMatrix", m) {}
};

// A sliding-field evaluation outside the domain where it is defined.
struct OutsideDomain : Error {
    explicit OutsideDomain(const std::string& m) : Error("OutsideDomain", m) {}
};

// A declared family does not reduce to the stated vector fields at the
// endpoint values of its first argument.
struct FamilyEndpointMismatch : Error {
    explicit FamilyEndpointMismatch(const std::string& m)
        : Error("FamilyEndpointMismatch", m) {}
};

// The fast-equilibrium equation has no admissible solution.
struct NoFastEquilibrium : Error {
    explicit NoFastEquilibrium(const std::string& m) : Error("NoFastEquilibrium", m) {}
};

// An operation requiring a monotonic transition function received one that
// is not monotonic.
struct NonMonotonicPhi : Error {
    explicit NonMonotonicPhi(const std::string& m) : Error("NonMonotonicPhi", m) {}
};

// Classification was requested at a point that does not lie on the critical set.
struct NotOnCriticalSet : Error {
    explicit NotOnCriticalSet(const std::string& m) : Error("NotOnCriticalSet", m) {}
};

// A fit needs more samples than were supplied.
struct InsufficientSamples : Error {
    explicit InsufficientSamples(const std::string& m) : Error("InsufficientSamples", m) {}
};

// A measured interval width is below floating-point resolution.
struct UnresolvableWidth : Error {
    explicit UnresolvableWidth(const std::string& m) : Error("UnresolvableWidth", m) {}
};

// A registry lookup for an id that does not exist.
struct UnknownId : Error {
    explicit UnknownId(const std::string& m) : Error("UnknownId", m) {}
};

}  // namespace sfreg
