#ifndef TAPER_TPA_ERRORS_HPP
#define TAPER_TPA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace taper_tpa {

/// Argument outside the mathematical or physical domain of an operation.
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical procedure (root finder, integrator, quadrature) failed to
/// deliver a result at the requested accuracy.
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The fundamental mode could not be bracketed on the scan grid.
class no_guided_root : public numeric_error {
public:
    using numeric_error::numeric_error;
};

/// Malformed configuration or command-line input.
class config_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace taper_tpa

#endif // TAPER_TPA_ERRORS_HPP
