#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace trilin {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid graph construction input (loops, out-of-range endpoints, label clashes).
class GraphError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line)
        : Error(line ? "line " + std::to_string(line) + ": " + message : message), line_(line)
    {
    }

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A graph exceeds a configured size cap.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// A witness is not even well-formed (non-bijective map, size mismatch).
class CertificateError : public Error {
public:
    using Error::Error;
};

/// Gadget roles or registries do not have the required shape.
class StructuralError : public Error {
public:
    using Error::Error;
};

/// Embedded or on-disk data failed its checksum or consistency checks.
class IntegrityError : public Error {
public:
    using Error::Error;
};

/// A search ran out of nodes or time before it could decide.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

class UnsatisfiedClause : public Error {
public:
    UnsatisfiedClause(const std::string& message, std::size_t clause)
        : Error(message), clause_(clause)
    {
    }

    /// One-based clause index.
    std::size_t clause() const noexcept { return clause_; }

private:
    std::size_t clause_;
};

/// Refusal to run an exponential procedure above its configured guard.
class GuardExceeded : public Error {
public:
    using Error::Error;
};

} // namespace trilin
