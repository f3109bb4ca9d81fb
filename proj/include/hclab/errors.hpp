#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hclab {

/// Invalid parameter value (out of range, wrong kind, failed precondition).
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Vector or matrix sizes that do not line up.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed network or graph input (bad index, self-loop, cycle).
class ConstructionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Unknown node, template, or key.
class LookupError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Fewer observations than parameters.
class InsufficientDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Rank-deficient design; `column()` is the first column found dependent.
class SingularDesignError : public std::runtime_error {
public:
    SingularDesignError(std::size_t column, const std::string& name)
        : std::runtime_error("singular design: column " + std::to_string(column) +
                             (name.empty() ? std::string() : " (" + name + ")") +
                             " is linearly dependent on the others"),
          column_(column) {}

    std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

}  // namespace hclab
