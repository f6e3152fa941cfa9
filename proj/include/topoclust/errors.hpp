#pragma once
#include <stdexcept>
#include <string>

namespace topoclust {

// Root of the library's exception hierarchy. Every error thrown by the
// library derives from Error, so callers can catch one type at the boundary.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A required file or directory does not exist (or contains no usable members).
class MissingPath : public Error {
public:
    using Error::Error;
};

// A file exists but its content is malformed.
class ParseError : public Error {
public:
    ParseError(const std::string& file, long line, const std::string& detail)
        : Error(file + ":" + std::to_string(line) + ": " + detail) {}
    explicit ParseError(const std::string& what) : Error(what) {}
};

// Ensemble members disagree on dims/spacing/origin, or a field is self-inconsistent.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

// A scalar value is NaN or infinite.
class NonFiniteValue : public Error {
public:
    using Error::Error;
};

// An argument violates an operation's precondition.
class InvalidParameter : public Error {
public:
    using Error::Error;
};

// Filesystem write/read failure not attributable to parsing.
class IoError : public Error {
public:
    using Error::Error;
};

// Diagrams from different families (minima vs maxima) were mixed.
class FamilyMismatch : public Error {
public:
    using Error::Error;
};

// An operation that requires at least one element received none.
class EmptyInput : public Error {
public:
    using Error::Error;
};

// k outside the valid range 1..n.
class InvalidK : public Error {
public:
    using Error::Error;
};

// Scoring requested with k == n; the variance denominator d*(n-k) vanishes.
class KEqualsN : public Error {
public:
    using Error::Error;
};

// Estimated in-cluster variance is exactly zero; the log-likelihood is undefined.
class DegenerateVariance : public Error {
public:
    using Error::Error;
};

// Clustering results passed to selection disagree (different n, non-consecutive k).
class InconsistentInputs : public Error {
public:
    using Error::Error;
};

} // namespace topoclust
