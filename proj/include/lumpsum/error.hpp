#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lumpsum {

/// Failure categories. User-facing categories map to CLI exit code 1,
/// internal ones (numerical breakdown, broken invariants) to exit code 2.
enum class ErrorCode {
    invalid_model,
    invalid_grid,
    invalid_argument,
    domain,
    config,
    io,
    numerical,
    invariant,
};

std::string_view to_string(ErrorCode code) noexcept;

inline bool is_user_error(ErrorCode code) noexcept {
    return code != ErrorCode::numerical && code != ErrorCode::invariant;
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace lumpsum
