#ifndef TAPER_TPA_MODE_SOLVER_HPP
#define TAPER_TPA_MODE_SOLVER_HPP

// Fundamental HE11 mode of a step-index silica nanofiber.

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "taper_tpa/errors.hpp"
#include "taper_tpa/specfun.hpp"
#include "taper_tpa/units.hpp"

namespace taper_tpa {

/// First zero of J0; above this V the fiber guides more than HE11.
inline constexpr double single_mode_v_cutoff = 2.405;

/// Fused-silica refractive index from the Malitson three-term Sellmeier fit.
/// Valid for 210 nm <= lambda <= 3.7 um.
inline double silica_index(double lambda)
{
    if (!(lambda >= 210e-9 && lambda <= 3.7e-6))
        throw domain_error("silica_index: wavelength outside the Sellmeier validity range [210 nm, 3.7 um]");
    const double l2 = (lambda * 1e6) * (lambda * 1e6);
    const double n2 = 1.0 + 0.6961663 * l2 / (l2 - 0.0684043 * 0.0684043)
        + 0.4079426 * l2 / (l2 - 0.1162414 * 0.1162414)
        + 0.8974794 * l2 / (l2 - 9.896161 * 9.896161);
    return std::sqrt(n2);
}

struct WaveguideGeometry {
    double diameter = 0.0;   // m
    double wavelength = 0.0; // m, vacuum
    double n_core = 0.0;
    double n_clad = 1.0;
    bool dispersive_core = false; // n_core follows silica_index(wavelength)

    static WaveguideGeometry silica(double diameter, double wavelength, double n_clad = 1.0)
    {
        return {diameter, wavelength, silica_index(wavelength), n_clad, true};
    }

    /// Same fiber probed at another wavelength.
    WaveguideGeometry at_wavelength(double lambda) const
    {
        WaveguideGeometry g = *this;
        g.wavelength = lambda;
        if (dispersive_core)
            g.n_core = silica_index(lambda);
        return g;
    }

    double radius() const { return 0.5 * diameter; }
    double k0() const { return two_pi / wavelength; }

    void validate() const
    {
        if (!(diameter > 0.0))
            throw domain_error("waveguide diameter must be positive");
        if (!(wavelength > 0.0))
            throw domain_error("waveguide wavelength must be positive");
        if (!(n_clad >= 1.0 && n_core > n_clad))
            throw domain_error("waveguide indices must satisfy n_core > n_clad >= 1");
    }
};

struct ModeSolution {
    WaveguideGeometry geometry;
    double beta = 0.0; // rad/m
    double k0 = 0.0;   // rad/m
    double a = 0.0;    // core radius, m
    double U = 0.0;
    double W = 0.0;
    double V = 0.0;
    double n_eff = 0.0;
    double s = 0.0; // hybrid-mode parameter
    double v_group = std::numeric_limits<double>::quiet_NaN();
    bool single_mode = true;

    double omega() const { return wavelength_to_omega(geometry.wavelength); }
    double phase_velocity() const { return PhysicalConstants::c / n_eff; }
    double h() const { return U / a; } // transverse wavenumber inside
    double q() const { return W / a; } // decay constant outside
};

inline double waveguide_v(const WaveguideGeometry& g)
{
    g.validate();
    return g.k0() * g.radius() * std::sqrt(g.n_core * g.n_core - g.n_clad * g.n_clad);
}

/// Left- and right-hand sides of the HE11 eigenvalue equation
///   [J1'(U)/(U J1(U)) + K1'(W)/(W K1(W))] [J1'(U)/(U J1(U)) + (n2/n1)^2 K1'(W)/(W K1(W))]
///     = (beta/(k0 n1))^2 (V/(U W))^4
/// With n2 = 1 the second bracket is exactly K1'/(n1^2 W K1).
struct DispersionTerms {
    double lhs = 0.0;
    double rhs = 0.0;

    double residual() const { return lhs - rhs; }
    double scale() const { return std::max(std::abs(lhs), std::abs(rhs)); }
};

namespace detail {

struct TransverseParams {
    double U;
    double W;
};

inline TransverseParams transverse(double beta, const WaveguideGeometry& g)
{
    const double k0 = g.k0();
    const double a = g.radius();
    const double core = k0 * k0 * g.n_core * g.n_core - beta * beta;
    const double clad = beta * beta - k0 * k0 * g.n_clad * g.n_clad;
    if (!(core > 0.0 && clad > 0.0))
        throw domain_error("propagation constant outside the guided window k0 n2 < beta < k0 n1");
    return {a * std::sqrt(core), a * std::sqrt(clad)};
}

inline double j_ratio(double U)
{
    const auto j = specfun::bessel_j012(U);
    return 0.5 * (j.order0 - j.order2) / (U * j.order1);
}

inline double k_ratio(double W)
{
    const auto k = specfun::bessel_k012(W);
    return -0.5 * (k.order0 + k.order2) / (W * k.order1);
}

} // namespace detail

inline DispersionTerms dispersion_terms(double beta, const WaveguideGeometry& g)
{
    g.validate();
    const auto [U, W] = detail::transverse(beta, g);
    const double V = waveguide_v(g);
    if (specfun::bessel_j(1, U) == 0.0)
        return {std::numeric_limits<double>::infinity(), 0.0};
    const double jr = detail::j_ratio(U);
    const double kr = detail::k_ratio(W);
    const double index_ratio = (g.n_clad * g.n_clad) / (g.n_core * g.n_core);
    const double lhs = (jr + kr) * (jr + index_ratio * kr);
    const double b = beta / (g.k0() * g.n_core);
    const double vuw = V / (U * W);
    return {lhs, b * b * vuw * vuw * vuw * vuw};
}

/// LHS - RHS of the eigenvalue equation. A pole (J1(U) = 0) returns +inf.
inline double dispersion_residual(double beta, const WaveguideGeometry& g)
{
    return dispersion_terms(beta, g).residual();
}

/// Effective-index interval containing a sign change of the residual.
struct NeffBracket {
    double lo = 0.0;
    double hi = 0.0;
};

inline constexpr int default_scan_points = 2000;

/// Uniform n_eff scan over (n2 + 1e-6, n1 - 1e-6). Intervals across which
/// J1(U) changes sign hold a pole, not a root, and are skipped.
/// Brackets are returned in increasing n_eff.
inline std::vector<NeffBracket> scan_brackets(const WaveguideGeometry& g, int points = default_scan_points)
{
    g.validate();
    const double lo = g.n_clad + 1e-6;
    const double hi = g.n_core - 1e-6;
    const double k0 = g.k0();
    std::vector<NeffBracket> out;
    if (!(hi > lo))
        return out;
    const double step = (hi - lo) / (points - 1);
    double prev_n = lo;
    double prev_res = dispersion_residual(lo * k0, g);
    double prev_j1 = specfun::bessel_j(1, detail::transverse(lo * k0, g).U);
    for (int i = 1; i < points; ++i) {
        const double n = i + 1 == points ? hi : lo + i * step;
        const double res = dispersion_residual(n * k0, g);
        const double j1 = specfun::bessel_j(1, detail::transverse(n * k0, g).U);
        const bool root_sign = std::signbit(res) != std::signbit(prev_res);
        const bool pole = std::signbit(j1) != std::signbit(prev_j1) || j1 == 0.0 || prev_j1 == 0.0;
        if (root_sign && !pole && std::isfinite(res) && std::isfinite(prev_res))
            out.push_back({prev_n, n});
        prev_n = n;
        prev_res = res;
        prev_j1 = j1;
    }
    return out;
}

inline double hybrid_parameter(double U, double W)
{
    return (1.0 / (U * U) + 1.0 / (W * W)) / (detail::j_ratio(U) + detail::k_ratio(W));
}

/// Fundamental root without the group velocity (v_group left NaN).
inline ModeSolution solve_fundamental(const WaveguideGeometry& g)
{
    const auto brackets = scan_brackets(g);
    if (brackets.empty()) {
        std::ostringstream msg;
        msg << "no guided root for D = " << g.diameter * 1e9 << " nm, lambda = " << g.wavelength * 1e9
            << " nm (V = " << waveguide_v(g) << "; mode too close to cutoff)";
        throw no_guided_root(msg.str());
    }
    const double k0 = g.k0();
    double lo = brackets.back().lo;
    double hi = brackets.back().hi;
    const bool lo_negative = std::signbit(dispersion_residual(lo * k0, g));
    // bisect to the resolution of double
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        if (std::signbit(dispersion_residual(mid * k0, g)) == lo_negative)
            lo = mid;
        else
            hi = mid;
    }

    ModeSolution m;
    m.geometry = g;
    m.n_eff = 0.5 * (lo + hi);
    m.k0 = k0;
    m.beta = m.n_eff * k0;
    m.a = g.radius();
    const auto tp = detail::transverse(m.beta, g);
    m.U = tp.U;
    m.W = tp.W;
    m.V = waveguide_v(g);
    m.s = hybrid_parameter(m.U, m.W);
    m.single_mode = m.V < single_mode_v_cutoff;
    return m;
}

/// d omega / d beta by a central difference over modes re-solved at
/// omega (1 +- rel_step), with the core index re-evaluated at each wavelength.
inline double group_velocity(const WaveguideGeometry& g, double rel_step = 1e-4)
{
    const double omega = wavelength_to_omega(g.wavelength);
    const double omega_up = omega * (1.0 + rel_step);
    const double omega_down = omega * (1.0 - rel_step);
    const double beta_up = solve_fundamental(g.at_wavelength(omega_to_wavelength(omega_up))).beta;
    const double beta_down = solve_fundamental(g.at_wavelength(omega_to_wavelength(omega_down))).beta;
    return (omega_up - omega_down) / (beta_up - beta_down);
}

inline ModeSolution solve_he11(const WaveguideGeometry& g)
{
    ModeSolution m = solve_fundamental(g);
    m.v_group = group_velocity(g);
    return m;
}

/// Diameter at which V reaches the single-mode cutoff.
inline double single_mode_cutoff_diameter(double lambda, double n_clad = 1.0)
{
    const double n1 = silica_index(lambda);
    if (!(n1 > n_clad))
        throw domain_error("single_mode_cutoff_diameter: core index must exceed cladding index");
    return 2.0 * single_mode_v_cutoff / ((two_pi / lambda) * std::sqrt(n1 * n1 - n_clad * n_clad));
}

} // namespace taper_tpa

#endif // TAPER_TPA_MODE_SOLVER_HPP
