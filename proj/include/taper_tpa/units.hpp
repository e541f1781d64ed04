#ifndef TAPER_TPA_UNITS_HPP
#define TAPER_TPA_UNITS_HPP

#include <cmath>
#include <numbers>
#include <string>

#include "taper_tpa/errors.hpp"

namespace taper_tpa {

// CODATA 2018, SI units.
struct PhysicalConstants {
    static constexpr double c = 299792458.0;          // m/s
    static constexpr double hbar = 1.054571817e-34;   // J s
    static constexpr double e_charge = 1.602176634e-19; // C
    static constexpr double eps0 = 8.8541878128e-12;  // F/m
};

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Rb 5S1/2 -> 5P3/2 (D2) vacuum wavelength.
inline constexpr double rb_d2_wavelength = 780.24e-9;

enum class Direction { forward, backward };

struct BeamSpec {
    double wavelength = 0.0; // m
    double power = 0.0;      // W
    Direction direction = Direction::forward;

    void validate() const
    {
        if (!(wavelength >= 400e-9 && wavelength <= 1600e-9))
            throw domain_error("beam wavelength must lie in [400 nm, 1600 nm]");
        if (!(power >= 0.0))
            throw domain_error("beam power must be non-negative");
    }
};

inline double wavelength_to_omega(double lambda)
{
    if (!(lambda > 0.0))
        throw domain_error("wavelength must be positive");
    return two_pi * PhysicalConstants::c / lambda;
}

inline double omega_to_wavelength(double omega)
{
    if (!(omega > 0.0))
        throw domain_error("angular frequency must be positive");
    return two_pi * PhysicalConstants::c / omega;
}

/// Converts a wavelength offset around lambda0 to an angular-frequency offset.
inline double detuning_wavelength_to_angular(double delta_lambda, double lambda0)
{
    if (!(lambda0 > 0.0))
        throw domain_error("reference wavelength must be positive");
    return two_pi * PhysicalConstants::c * delta_lambda / (lambda0 * lambda0);
}

/// Transition dipole moment d = e r for an effective displacement r.
inline double dipole_from_radius(double r)
{
    if (!(r > 0.0))
        throw domain_error("dipole radius must be positive");
    return PhysicalConstants::e_charge * r;
}

} // namespace taper_tpa

#endif // TAPER_TPA_UNITS_HPP
