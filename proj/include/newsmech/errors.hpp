#pragma once

#include <stdexcept>
#include <string>

namespace newsmech {

// Exit codes surfaced by the CLI. Library code throws; the CLI maps.
enum class ErrorKind { validation = 1, unsupported = 2, nonconvergence = 3, domain = 1, resource = 1 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& code, const std::string& msg)
        : std::runtime_error(msg), kind_(kind), code_(code) {}
    ErrorKind kind() const { return kind_; }
    int exit_code() const { return static_cast<int>(kind_); }
    const std::string& code() const { return code_; }

private:
    ErrorKind kind_;
    std::string code_;
};

struct ValidationError : Error {
    explicit ValidationError(const std::string& msg) : Error(ErrorKind::validation, "validation", msg) {}
};
struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(ErrorKind::domain, "domain", msg) {}
};
struct ResourceError : Error {
    explicit ResourceError(const std::string& msg) : Error(ErrorKind::resource, "resource", msg) {}
};
struct UnsupportedInstance : Error {
    explicit UnsupportedInstance(const std::string& msg) : Error(ErrorKind::unsupported, "unsupported", msg) {}
};
struct NonConvergence : Error {
    NonConvergence(const std::string& msg, double gap)
        : Error(ErrorKind::nonconvergence, "nonconvergence", msg), gap_(gap) {}
    double gap() const { return gap_; }

private:
    double gap_;
};
struct InfeasibleError : Error {
    explicit InfeasibleError(const std::string& msg) : Error(ErrorKind::validation, "infeasible", msg) {}
};

}  // namespace newsmech
