#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace dampchain {

enum class ErrorCode {
    InvalidInput,
    DimensionMismatch,
    SingularSystem,
    NotConverged,
    IllConditioned,
    NonSemisimple,
    RegimeMismatch,
    ConditionViolated,
    Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Raised by the power method when max_iter is reached. Carries the last
/// iterate so callers can inspect how far it got.
class PowerIterationError : public Error {
public:
    PowerIterationError(const std::string& message, Eigen::VectorXd last_iterate,
                        double residual, long iterations)
        : Error(ErrorCode::NotConverged, message),
          last_iterate_(std::move(last_iterate)),
          residual_(residual),
          iterations_(iterations) {}

    const Eigen::VectorXd& last_iterate() const noexcept { return last_iterate_; }
    double residual() const noexcept { return residual_; }
    long iterations() const noexcept { return iterations_; }

private:
    Eigen::VectorXd last_iterate_;
    double residual_;
    long iterations_;
};

}  // namespace dampchain
