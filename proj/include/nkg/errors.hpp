#ifndef NKG_ERRORS_HPP
#define NKG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nkg {

// Invalid parameters, guards, or malformed config files.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Mismatched vector/grid dimensions.
struct shape_error : std::runtime_error {
    explicit shape_error(const std::string& msg) : std::runtime_error(msg) {}
};

// An analytically-real quantity came out with too large an imaginary part,
// or a similar internal consistency check failed.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Occupation-cap truncation lost more norm than allowed.
struct truncation_error : std::runtime_error {
    explicit truncation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Classical integration produced NaN/overflow; carries the last good time.
struct blowup_error : std::runtime_error {
    double last_good_time;
    blowup_error(const std::string& msg, double t)
        : std::runtime_error(msg), last_good_time(t) {}
};

// Krylov propagation failed to converge.
struct evolution_error : std::runtime_error {
    explicit evolution_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Operator assembly failed a structural check (e.g. Hermiticity).
struct assembly_error : std::runtime_error {
    explicit assembly_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace nkg

#endif
