#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace frechet {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two curves, points, or rows whose dimensions or lengths should agree do not.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// An input exceeds a documented size limit (recursion depth, enumeration size).
class LimitError : public Error {
public:
    using Error::Error;
};

/// Malformed curve file. `line()` is 1-based; 0 means the error is not tied to a line.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& detail, const std::string& source = "")
        : Error(format(line, detail, source)), line_(line), detail_(detail) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

private:
    static std::string format(std::size_t line, const std::string& detail, const std::string& source) {
        std::string where = source;
        if (line != 0) {
            where += source.empty() ? "line " + std::to_string(line) : ":" + std::to_string(line);
        }
        return where.empty() ? detail : where + ": " + detail;
    }

    std::size_t line_;
    std::string detail_;
};

} // namespace frechet
