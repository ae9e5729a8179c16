#ifndef FLUCTSIM_ERRORS_HPP
#define FLUCTSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fluctsim {

// Bad user input: wrong dimensions, invalid parameter ranges, empty grids.
class argument_error : public std::invalid_argument {
public:
    explicit argument_error(const std::string& what) : std::invalid_argument(what) {}
};

// A matrix that must be inverted is (numerically) singular.
class singularity_error : public std::runtime_error {
public:
    explicit singularity_error(const std::string& what) : std::runtime_error(what) {}
};

// Requested representation exceeds the configured size limits.
class capacity_error : public std::runtime_error {
public:
    explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

// An iterative routine failed to reach its tolerance.
class convergence_error : public std::runtime_error {
public:
    explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

// Two routes to the same number disagree beyond the pinned tolerance.
class consistency_error : public std::runtime_error {
public:
    explicit consistency_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace fluctsim

#endif
