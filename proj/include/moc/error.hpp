#pragma once

#include <stdexcept>
#include <string>

namespace moc {

// Exit status of the command line tool follows these categories.
enum class ErrorKind { domain = 1, format = 2, inconclusive = 3 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

struct DomainError : Error {
    explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

struct FormatError : Error {
    explicit FormatError(const std::string& what) : Error(ErrorKind::format, what) {}
};

struct Inconclusive : Error {
    explicit Inconclusive(const std::string& what) : Error(ErrorKind::inconclusive, what) {}
};

}  // namespace moc
