#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace spdelab {

/// Carries every violated constraint, not just the first one found.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(std::vector<std::string> issues);
    const std::vector<std::string>& issues() const noexcept { return issues_; }

private:
    std::vector<std::string> issues_;
};

/// A path produced NaN or Inf; the step that detected it is abandoned.
class NonFiniteState : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace spdelab
