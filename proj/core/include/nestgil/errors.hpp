#pragma once

#include <stdexcept>
#include <string>

namespace nestgil {

// Config / argument problems (CLI maps these to exit code 2).
struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Shape or data problems (CLI exit code 3).
struct data_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Iteration blew up (CLI exit code 4). Carries the stage it happened at.
struct divergence_error : std::runtime_error {
    int stage;
    explicit divergence_error(int k, const std::string& what)
        : std::runtime_error("stage " + std::to_string(k) + ": " + what), stage(k) {}
};

}  // namespace nestgil
