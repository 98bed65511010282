#ifndef GCM_ERRORS_HPP
#define GCM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gcm {

// Invalid input (bad dimension, nonpositive alpha/rho, out-of-range flags).
class domain_error : public std::invalid_argument {
public:
    explicit domain_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// An iteration or series failed to reach its tolerance.
class convergence_error : public std::runtime_error {
public:
    explicit convergence_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A table or accumulation lost all significant digits (detected, not silent).
class precision_error : public std::runtime_error {
public:
    explicit precision_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Two independent evaluation routes of the same quantity differ too much.
class disagreement_error : public std::runtime_error {
public:
    explicit disagreement_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Integer counts exceeded the representable width.
class overflow_error : public std::runtime_error {
public:
    explicit overflow_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace gcm

#endif
