#ifndef TAPER_TPA_MODE_FIELD_HPP
#define TAPER_TPA_MODE_FIELD_HPP

// HE11 electric field (one linear polarization), its cross-section energy
// normalization, and the mapping from beam power to field amplitude.
//
// Unit-amplitude convention: E_z(r < a) = J1(h r) cos(phi). With
// f = J1(U)/K1(W),
//   r < a:  E_r   = -i (beta/2h) [(1-s) J0(hr) - (1+s) J2(hr)] cos(phi)
//           E_phi = +i (beta/2h) [(1-s) J0(hr) + (1+s) J2(hr)] sin(phi)
//   r >= a: E_r   = -i (beta/2q) f [(1-s) K0(qr) + (1+s) K2(qr)] cos(phi)
//           E_phi = +i (beta/2q) f [(1-s) K0(qr) - (1+s) K2(qr)] sin(phi)
//           E_z   = f K1(qr) cos(phi)
// At a root of the eigenvalue equation E_z, E_phi and n^2 E_r are continuous
// across r = a.

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <utility>

#include "taper_tpa/errors.hpp"
#include "taper_tpa/mode_solver.hpp"
#include "taper_tpa/quadrature.hpp"
#include "taper_tpa/specfun.hpp"
#include "taper_tpa/units.hpp"

namespace taper_tpa {

struct FieldVector {
    std::complex<double> e_r;
    std::complex<double> e_phi;
    std::complex<double> e_z;

    double magnitude_sq() const { return std::norm(e_r) + std::norm(e_phi) + std::norm(e_z); }
};

/// Real radial amplitudes; E_r = -i radial cos(phi), E_phi = +i azimuthal sin(phi),
/// E_z = axial cos(phi).
struct RadialProfile {
    double radial = 0.0;
    double azimuthal = 0.0;
    double axial = 0.0;

    /// |e|^2 at azimuth phi.
    double intensity(double phi) const
    {
        const double c = std::cos(phi);
        const double s = std::sin(phi);
        return (radial * radial + axial * axial) * c * c + azimuthal * azimuthal * s * s;
    }
};

inline RadialProfile radial_profile(const ModeSolution& m, double r)
{
    if (!(r >= 0.0))
        throw domain_error("field radius must be non-negative");
    const double s = m.s;
    if (r < m.a) {
        const double h = m.h();
        const auto j = specfun::bessel_j012(h * r);
        const double pref = m.beta / (2.0 * h);
        return {pref * ((1.0 - s) * j.order0 - (1.0 + s) * j.order2),
                pref * ((1.0 - s) * j.order0 + (1.0 + s) * j.order2), j.order1};
    }
    const double q = m.q();
    const auto k = specfun::bessel_k012(q * r);
    const double match = specfun::bessel_j(1, m.U) / specfun::bessel_k(1, m.W);
    const double pref = m.beta / (2.0 * q) * match;
    return {pref * ((1.0 - s) * k.order0 + (1.0 + s) * k.order2),
            pref * ((1.0 - s) * k.order0 - (1.0 + s) * k.order2), match * k.order1};
}

/// Unit-amplitude field at (r, phi); r = a evaluates the exterior branch.
inline FieldVector field_at(const ModeSolution& m, double r, double phi)
{
    const auto p = radial_profile(m, r);
    constexpr std::complex<double> i{0.0, 1.0};
    return {-i * p.radial * std::cos(phi), i * p.azimuthal * std::sin(phi), p.axial * std::cos(phi)};
}

struct QuadratureOptions {
    int order = 16;            // Gauss-Legendre points per radial panel
    int interior_panels = 4;   // equal panels on [0, a]
    double panel_scale = 1.0;  // exterior panel widths in units of the decay length 1/q
    int azimuthal_nodes = 64;  // trapezoid nodes on [0, 2 pi)
    double truncation_tol = 1e-12;
    double convergence_tol = 1e-8; // allowed change under refined()

    /// Twice the radial and azimuthal resolution.
    QuadratureOptions refined() const
    {
        QuadratureOptions o = *this;
        o.interior_panels *= 2;
        o.panel_scale *= 0.5;
        o.azimuthal_nodes *= 2;
        return o;
    }
};

namespace detail {

/// Integral over phi of g(|e|^2 at phi) for one radius.
template <class G>
double ring_integral(const RadialProfile& p, int nodes, G&& g)
{
    return quadrature::periodic_trapezoid([&](double phi) { return g(p.intensity(phi)); }, nodes);
}

/// First and maximum exterior panel widths for a tail decaying like exp(-2 q r).
inline std::pair<double, double> tail_widths(double a, double q, double panel_scale)
{
    const double decay = 1.0 / q;
    return {0.25 * panel_scale * std::min(a, decay), panel_scale * decay};
}

inline void check_converged(const char* what, double coarse, double fine, double tol)
{
    const double rel = std::abs(fine - coarse) / std::abs(fine);
    if (!(rel <= tol)) {
        std::ostringstream msg;
        msg << what << ": quadrature not converged (coarse " << coarse << ", refined " << fine
            << ", relative change " << rel << " > " << tol << ")";
        throw numeric_error(msg.str());
    }
}

} // namespace detail

/// Epsilon-weighted energy integral of the unit-amplitude field over the
/// cross-section, split at the fiber surface (J/m per unit amplitude^2).
struct NormParts {
    double interior = 0.0;
    double exterior = 0.0;
    double exterior_upper = 0.0; // truncation radius of the exterior sweep

    double total() const { return interior + exterior; }
};

inline NormParts norm_parts(const ModeSolution& m, const QuadratureOptions& opt = {})
{
    const quadrature::GaussLegendre rule(opt.order);
    const double eps_in = PhysicalConstants::eps0 * m.geometry.n_core * m.geometry.n_core;
    const double eps_out = PhysicalConstants::eps0 * m.geometry.n_clad * m.geometry.n_clad;
    const auto energy = [&](double r) {
        return r * detail::ring_integral(radial_profile(m, r), opt.azimuthal_nodes, [](double e2) { return e2; });
    };

    NormParts parts;
    parts.interior = eps_in * rule.integrate_composite(energy, 0.0, m.a, opt.interior_panels);
    const auto [first, widest] = detail::tail_widths(m.a, m.q(), opt.panel_scale);
    const auto tail = quadrature::integrate_tail(energy, m.a, first, widest, rule, opt.truncation_tol);
    parts.exterior = eps_out * tail.value;
    parts.exterior_upper = tail.upper;
    return parts;
}

/// Cross-section energy integral, checked against a run at doubled resolution.
inline double norm_integral(const ModeSolution& m, const QuadratureOptions& opt = {})
{
    const double coarse = norm_parts(m, opt).total();
    const double fine = norm_parts(m, opt.refined()).total();
    detail::check_converged("norm_integral", coarse, fine, opt.convergence_tol);
    return fine;
}

/// Share of the mode energy outside the fiber.
inline double evanescent_fraction(const ModeSolution& m, const QuadratureOptions& opt = {})
{
    const auto parts = norm_parts(m, opt.refined());
    return parts.exterior / parts.total();
}

/// Single-photon field scale N_beta for a quantization length L_Q: the
/// energy integral of N_beta e over the L_Q-long volume equals hbar omega.
inline double single_photon_amplitude(const ModeSolution& m, double quantization_length,
                                      const QuadratureOptions& opt = {})
{
    if (!(quantization_length > 0.0))
        throw domain_error("quantization length must be positive");
    return std::sqrt(PhysicalConstants::hbar * m.omega() / (quantization_length * norm_integral(m, opt)));
}

/// Velocity used to turn beam power into photon line density.
enum class PowerVelocity { phase, group };

struct NormalizedMode {
    ModeSolution mode;
    double amplitude_scale = 0.0;     // N_beta, V/m
    double norm_integral = 0.0;       // J/m per unit amplitude^2
    double evanescent_fraction = 0.0;
    double quantization_length = 1.0; // m

    /// Energy of one photon in the quantization volume; equals hbar omega.
    double photon_energy() const
    {
        return amplitude_scale * amplitude_scale * quantization_length * norm_integral;
    }
};

inline NormalizedMode normalize(const ModeSolution& m, double quantization_length = 1.0,
                                const QuadratureOptions& opt = {})
{
    if (!(quantization_length > 0.0))
        throw domain_error("quantization length must be positive");
    const auto coarse = norm_parts(m, opt);
    const auto fine = norm_parts(m, opt.refined());
    detail::check_converged("norm_integral", coarse.total(), fine.total(), opt.convergence_tol);

    NormalizedMode nm;
    nm.mode = m;
    nm.norm_integral = fine.total();
    nm.evanescent_fraction = fine.exterior / fine.total();
    nm.quantization_length = quantization_length;
    nm.amplitude_scale = std::sqrt(PhysicalConstants::hbar * m.omega() / (quantization_length * nm.norm_integral));
    return nm;
}

inline double transport_velocity(const ModeSolution& m, PowerVelocity v)
{
    if (v == PowerVelocity::phase)
        return m.phase_velocity();
    if (!std::isfinite(m.v_group))
        throw domain_error("group velocity not available on this mode solution");
    return m.v_group;
}

/// Multiplier on |e(r, phi)|^2 giving the classical |E|^2 of a beam of the
/// given power: photon line density P / (hbar omega v) times one photon's
/// N_beta^2 spread over L_Q. L_Q cancels, leaving P / (v norm_integral).
inline double classical_amplitude_sq(const NormalizedMode& nm, double power,
                                     PowerVelocity velocity = PowerVelocity::phase)
{
    if (!(power >= 0.0))
        throw domain_error("beam power must be non-negative");
    const double photon_line_density
        = power / (PhysicalConstants::hbar * nm.mode.omega() * transport_velocity(nm.mode, velocity));
    return photon_line_density * nm.quantization_length * nm.amplitude_scale * nm.amplitude_scale;
}

} // namespace taper_tpa

#endif // TAPER_TPA_MODE_FIELD_HPP
