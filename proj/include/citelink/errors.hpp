#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace citelink {

/// Bad or unreadable input (CLI exit code 2).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A corpus line that could not be turned into a PaperRecord.
class ParseError : public InputError {
public:
    ParseError(std::size_t line, const std::string &reason)
        : InputError("line " + std::to_string(line) + ": " + reason), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Empty windows, empty graphs, single-class labels (CLI exit code 3).
class DegenerateDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite loss during training (CLI exit code 4).
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(std::size_t epoch, const std::string &what)
        : std::runtime_error("diverged at epoch " + std::to_string(epoch) + ": " + what),
          epoch_(epoch) {}

    std::size_t epoch() const noexcept { return epoch_; }

private:
    std::size_t epoch_;
};

} // namespace citelink
