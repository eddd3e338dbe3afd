#pragma once

#include <stdexcept>
#include <string>

namespace lzlab {

// Error categories map one-to-one onto the CLI exit codes.
enum class ErrorKind {
    config,     // exit 2
    numerical,  // exit 3
    budget      // exit 4
};

class LabError : public std::runtime_error {
public:
    LabError(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline LabError config_error(const std::string& what) { return {ErrorKind::config, what}; }
inline LabError numerical_error(const std::string& what) { return {ErrorKind::numerical, what}; }
inline LabError budget_error(const std::string& what) { return {ErrorKind::budget, what}; }

inline int exit_code(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::config: return 2;
    case ErrorKind::numerical: return 3;
    case ErrorKind::budget: return 4;
    }
    return 3;
}

}  // namespace lzlab
