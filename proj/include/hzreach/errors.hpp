#pragma once

#include <stdexcept>
#include <string>

namespace hzreach
{

/// Operand dimensions do not agree.
class ShapeError : public std::invalid_argument
{
public:
    explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

/// A precondition on argument values was violated (bad bounds, k > n_b, ...).
class ContractError : public std::invalid_argument
{
public:
    explicit ContractError(const std::string& what) : std::invalid_argument(what) {}
};

/// Input is degenerate for the requested operation (e.g. zero halfspace normal).
class DegenerateInputError : public std::invalid_argument
{
public:
    explicit DegenerateInputError(const std::string& what) : std::invalid_argument(what) {}
};

/// The operation needs a nonempty set.
class EmptySetError : public std::runtime_error
{
public:
    explicit EmptySetError(const std::string& what) : std::runtime_error(what) {}
};

/// A binary-pattern enumeration or verification budget would be exceeded.
class CapacityError : public std::runtime_error
{
public:
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

/// Generator structure does not match what generator alignment expects.
class StructuralError : public std::runtime_error
{
public:
    explicit StructuralError(const std::string& what) : std::runtime_error(what) {}
};

/// Constraint elimination pivot is exactly zero.
class PivotError : public std::invalid_argument
{
public:
    explicit PivotError(const std::string& what) : std::invalid_argument(what) {}
};

/// Constraint elimination pivot is nonzero but too small to divide by safely.
class ConditioningError : public std::invalid_argument
{
public:
    explicit ConditioningError(const std::string& what) : std::invalid_argument(what) {}
};

/// The LP/MILP engine hit an iteration or node cap.
class SolverLimitError : public std::runtime_error
{
public:
    explicit SolverLimitError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed JSON input (network, set, scenario).
class FormatError : public std::runtime_error
{
public:
    FormatError(std::string path, const std::string& reason)
        : std::runtime_error(path.empty() ? reason : path + ": " + reason), path_(std::move(path)), reason_(reason)
    {
    }

    const std::string& path() const noexcept { return path_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::string path_;
    std::string reason_;
};

} // namespace hzreach
