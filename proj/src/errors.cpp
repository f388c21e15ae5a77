#include "spdelab/errors.hpp"

namespace spdelab {

namespace {
std::string join(const std::vector<std::string>& issues) {
    std::string msg;
    for (const auto& s : issues) {
        if (!msg.empty()) msg += "; ";
        msg += s;
    }
    return msg.empty() ? "validation failed" : msg;
}
}  // namespace

ValidationError::ValidationError(std::vector<std::string> issues)
    : std::invalid_argument(join(issues)), issues_(std::move(issues)) {}

}  // namespace spdelab
