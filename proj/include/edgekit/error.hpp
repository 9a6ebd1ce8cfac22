#pragma once

#include <stdexcept>
#include <string>

namespace edgekit {

/// Base for all library failures. The category decides the CLI exit code.
class Error : public std::runtime_error {
public:
    enum class Category { Usage = 1, Io = 2, Data = 3 };

    Error(Category category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    Category category() const noexcept { return category_; }
    int exit_code() const noexcept { return static_cast<int>(category_); }

private:
    Category category_;
};

/// Bad parameters: even kernel sizes, out-of-range thresholds, unknown names.
class UsageError : public Error {
public:
    explicit UsageError(const std::string& what) : Error(Category::Usage, what) {}
};

/// Unreadable or unwritable files.
class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(Category::Io, what) {}
};

/// Content that parses but violates an invariant (corrupt header, bad kernel, size mismatch).
class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(Category::Data, what) {}
};

}  // namespace edgekit
