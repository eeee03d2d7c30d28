#pragma once
#include <stdexcept>
#include <string>

namespace parc {

// Thrown when tensor/layer dimensions do not line up.
struct ShapeError : std::runtime_error {
    explicit ShapeError(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown on invalid values (bad index, empty input, malformed config).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when a caller violates a stateful protocol (e.g. step after done).
struct ContractError : std::runtime_error {
    explicit ContractError(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when training hits a non-finite loss; carries a diagnostic snapshot.
struct TrainingFault : std::runtime_error {
    explicit TrainingFault(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace parc
