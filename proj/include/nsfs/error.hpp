#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nsfs {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (x = 0, n < 3, r <= 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Two fields (or a field and a plan) live on different grids.
class GridMismatch : public Error {
public:
    using Error::Error;
};

/// Plan construction would exceed the configured memory budget.
class MemoryBudgetExceeded : public Error {
public:
    MemoryBudgetExceeded(std::size_t required, std::size_t budget)
        : Error("convolution plan needs " + std::to_string(required) +
                " bytes, budget is " + std::to_string(budget) + " bytes"),
          required_bytes(required),
          budget_bytes(budget) {}
    std::size_t required_bytes;
    std::size_t budget_bytes;
};

/// Malformed or inconsistent binary field file.
class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace nsfs
