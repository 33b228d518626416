#ifndef CODA_ERROR_HPP
#define CODA_ERROR_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace coda {

/// Malformed or out-of-contract input: bad CSV cells, zero rows, overlapping
/// part sets, unknown names.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// CSV parse failure carrying the 1-based row (file line) and column.
class ParseError : public InputError {
public:
    ParseError(std::size_t row, std::size_t column, const std::string& what);

    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

/// The data carry no logratio variance (constant compositions), so no
/// percentage or ordination is defined.
class DegenerateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A hierarchy document or commit breaks the amalgamation-tree rules.
class HierarchyError : public InputError {
public:
    HierarchyError(const std::string& what, std::optional<std::string> offending = std::nullopt)
        : InputError(what), offending_(std::move(offending)) {}

    const std::optional<std::string>& offending() const noexcept { return offending_; }

private:
    std::optional<std::string> offending_;
};

}  // namespace coda

#endif  // CODA_ERROR_HPP
