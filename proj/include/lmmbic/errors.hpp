#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lmmbic {

// Shape disagreement between matrices, vectors or a candidate structure.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A covariance or correlation block could not be Cholesky-factorized.
class FactorizationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The candidate's mean structure is not estimable on the given dataset.
class UnidentifiableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
          line_(line) {}

    // 1-based line in the input file, 0 when not tied to a line.
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace lmmbic
