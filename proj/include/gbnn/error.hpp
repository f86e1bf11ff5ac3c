#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gbnn {

/// Operand vectors or tensors with incompatible lengths/shapes.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A value outside an operation's domain (zero polynomial, empty input, ...).
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An encoded ideal that does not describe lead-first binomials.
class MalformedEncoding : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Internal consistency failure between two computed quantities.
class InconsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Text file that cannot be parsed. `line()` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Buchberger's algorithm hit its pair budget. Carries partial statistics only.
class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(std::uint64_t pairs_processed, std::uint64_t reductions_to_zero,
                   std::size_t basis_size)
        : std::runtime_error("pair budget exceeded after " + std::to_string(pairs_processed) +
                             " pairs"),
          pairs_processed(pairs_processed),
          reductions_to_zero(reductions_to_zero),
          basis_size(basis_size) {}

    std::uint64_t pairs_processed;
    std::uint64_t reductions_to_zero;
    std::size_t basis_size;
};

}  // namespace gbnn
