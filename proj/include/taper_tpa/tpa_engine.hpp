#ifndef TAPER_TPA_TPA_ENGINE_HPP
#define TAPER_TPA_TPA_ENGINE_HPP

// Total two-photon absorption rate of a vapor surrounding a nanofiber taper,
// fractional absorption, and parameter sweeps.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "taper_tpa/atom_dynamics.hpp"
#include "taper_tpa/csv.hpp"
#include "taper_tpa/errors.hpp"
#include "taper_tpa/mode_field.hpp"
#include "taper_tpa/mode_solver.hpp"
#include "taper_tpa/parallel.hpp"
#include "taper_tpa/units.hpp"

namespace taper_tpa {

/// `isotropic` multiplies the rate by 1/9 (<cos^2> = 1/3 per transition).
enum class OrientationAveraging { none, isotropic };

inline double orientation_factor(OrientationAveraging o)
{
    return o == OrientationAveraging::isotropic ? 1.0 / 9.0 : 1.0;
}

struct TpaScenario {
    double diameter = 0.0;      // m
    double taper_length = 0.0;  // m
    double density = 0.0;       // atoms per m^3
    BeamSpec beam_a{};
    BeamSpec beam_b{};
    AtomParams atom{};          // d1, d2, gamma1, gamma2, delta; couplings unused here
    OrientationAveraging orientation = OrientationAveraging::none;
    PowerVelocity power_velocity = PowerVelocity::phase;
    double n_clad = 1.0;
    double quantization_length = 1.0; // m; cancels from every physical output
    QuadratureOptions quadrature{};

    bool degenerate() const { return beam_a.wavelength == beam_b.wavelength; }

    void validate() const
    {
        if (!(diameter > 0.0))
            throw domain_error("scenario: diameter must be positive");
        if (!(taper_length > 0.0))
            throw domain_error("scenario: taper length must be positive");
        if (!(density >= 0.0))
            throw domain_error("scenario: vapor density must be non-negative");
        if (!(quantization_length > 0.0))
            throw domain_error("scenario: quantization length must be positive");
        beam_a.validate();
        beam_b.validate();
        atom.validate();
        if (!(atom.gamma1 > 0.0 && atom.gamma2 > 0.0))
            throw domain_error("scenario: decay rates must be positive");
    }
};

/// Degenerate 778.1 nm beams of 1 mW each on a 350 nm x 5 mm taper in
/// 1e12 cm^-3 Rb vapor (5S1/2 -> 5P3/2 -> 5D5/2).
inline TpaScenario nominal_scenario()
{
    TpaScenario s;
    s.diameter = 350e-9;
    s.taper_length = 5e-3;
    s.density = 1e12 * 1e6;
    s.beam_a = {778.1e-9, 1e-3, Direction::forward};
    s.beam_b = {778.1e-9, 1e-3, Direction::backward};
    s.atom.d1 = dipole_from_radius(0.223e-9);
    s.atom.d2 = dipole_from_radius(0.0492e-9);
    s.atom.gamma1 = 1e9;
    s.atom.gamma2 = 1e9;
    s.atom.delta = 6.54e12;
    return s;
}

struct BeamPair {
    double wavelength_a = 0.0;
    double wavelength_b = 0.0;
};

/// Beam a sits `delta` (rad/s) above the Rb D2 line; beam b closes the
/// two-photon resonance omega_a + omega_b = 2 omega(degenerate_wavelength).
inline BeamPair two_color_wavelengths(double delta, double degenerate_wavelength)
{
    const double omega_a = wavelength_to_omega(rb_d2_wavelength) + delta;
    const double omega_b = 2.0 * wavelength_to_omega(degenerate_wavelength) - omega_a;
    if (!(omega_a > 0.0 && omega_b > 0.0))
        throw domain_error("two_color_wavelengths: detuning leaves no physical beam pair");
    return {omega_to_wavelength(omega_a), omega_to_wavelength(omega_b)};
}

/// Copy of the scenario in two-color mode at detuning `delta`.
inline TpaScenario with_two_color(TpaScenario s, double delta, double degenerate_wavelength)
{
    const auto pair = two_color_wavelengths(delta, degenerate_wavelength);
    s.atom.delta = delta;
    s.beam_a.wavelength = pair.wavelength_a;
    s.beam_b.wavelength = pair.wavelength_b;
    return s;
}

namespace detail {

/// r dr dphi integral of |e_a|^2 |e_b|^2 over r >= lower.
inline double overlap_tail(const ModeSolution& a, const ModeSolution& b, double lower, const QuadratureOptions& opt)
{
    const quadrature::GaussLegendre rule(opt.order);
    const auto integrand = [&](double r) {
        const auto pa = radial_profile(a, r);
        const auto pb = radial_profile(b, r);
        return r * quadrature::periodic_trapezoid(
                   [&](double phi) { return pa.intensity(phi) * pb.intensity(phi); }, opt.azimuthal_nodes);
    };
    const double q = a.q() + b.q();
    const auto [first, widest] = tail_widths(lower, q, opt.panel_scale);
    return quadrature::integrate_tail(integrand, lower, first, widest, rule, opt.truncation_tol).value;
}

} // namespace detail

/// L times the exterior integral of |E_a,cl|^2 |E_b,cl|^2 (V^4 m^-2, i.e.
/// the volume integral of the fourth-power field). `lower` defaults to the
/// fiber surface.
inline double field4_exterior_integral(const NormalizedMode& mode_a, const NormalizedMode& mode_b, double power_a,
                                       double power_b, double length,
                                       PowerVelocity velocity = PowerVelocity::phase,
                                       const QuadratureOptions& opt = {},
                                       std::optional<double> lower = std::nullopt)
{
    const double a = mode_a.mode.a;
    if (std::abs(mode_b.mode.a - a) > 1e-12 * a)
        throw domain_error("field4_exterior_integral: both modes must share the fiber geometry");
    if (!(length > 0.0))
        throw domain_error("field4_exterior_integral: taper length must be positive");
    const double r0 = lower.value_or(a);
    if (!(r0 >= a))
        throw domain_error("field4_exterior_integral: lower limit must lie outside the fiber");
    const double scale = classical_amplitude_sq(mode_a, power_a, velocity)
        * classical_amplitude_sq(mode_b, power_b, velocity);
    if (scale == 0.0)
        return 0.0;
    const double coarse = detail::overlap_tail(mode_a.mode, mode_b.mode, r0, opt);
    const double fine = detail::overlap_tail(mode_a.mode, mode_b.mode, r0, opt.refined());
    detail::check_converged("field4_exterior_integral", coarse, fine, opt.convergence_tol);
    return length * scale * fine;
}

struct ModeSummary {
    double wavelength = 0.0;
    double n_eff = 0.0;
    double beta = 0.0;
    double U = 0.0;
    double W = 0.0;
    double V = 0.0;
    double v_group = 0.0;
    double v_phase = 0.0;
    double evanescent_fraction = 0.0;
    bool single_mode = true;
};

struct TpaResult {
    double r2_total = 0.0;            // 1/s
    double absorption_fraction = 0.0; // capped at 1
    double field4_integral = 0.0;     // V^4 m^-2
    ModeSummary mode_a;
    ModeSummary mode_b;
    bool saturation_warning = false;  // A > 0.2: weak-excitation assumption strained
};

inline constexpr double saturation_threshold = 0.2;

/// (hbar omega_a + hbar omega_b) R2 / (P_a + P_b).
inline double fractional_absorption(double r2, const TpaScenario& s)
{
    if (!(r2 >= 0.0))
        throw domain_error("fractional_absorption: rate must be non-negative");
    const double total_power = s.beam_a.power + s.beam_b.power;
    if (total_power == 0.0) {
        if (r2 == 0.0)
            return 0.0;
        throw domain_error("fractional_absorption: nonzero rate with zero incident power");
    }
    const double pair_energy = PhysicalConstants::hbar
        * (wavelength_to_omega(s.beam_a.wavelength) + wavelength_to_omega(s.beam_b.wavelength));
    return pair_energy * r2 / total_power;
}

namespace detail {

struct PreparedScenario {
    NormalizedMode a;
    NormalizedMode b;
    double field4 = 0.0;
};

inline ModeSummary summarize(const NormalizedMode& nm)
{
    const auto& m = nm.mode;
    return {m.geometry.wavelength, m.n_eff, m.beta, m.U, m.W, m.V, m.v_group, m.phase_velocity(),
            nm.evanescent_fraction, m.single_mode};
}

template <class F>
auto with_context(const TpaScenario& s, F&& f) -> decltype(f())
{
    const auto context = [&] {
        std::ostringstream os;
        os << "scenario D = " << s.diameter * 1e9 << " nm, lambda_a = " << s.beam_a.wavelength * 1e9
           << " nm, lambda_b = " << s.beam_b.wavelength * 1e9 << " nm: ";
        return os.str();
    };
    try {
        return f();
    } catch (const no_guided_root& e) {
        throw no_guided_root(context() + e.what());
    } catch (const numeric_error& e) {
        throw numeric_error(context() + e.what());
    } catch (const domain_error& e) {
        throw domain_error(context() + e.what());
    }
}

inline PreparedScenario prepare(const TpaScenario& s)
{
    s.validate();
    return with_context(s, [&] {
        PreparedScenario p;
        const auto ga = WaveguideGeometry::silica(s.diameter, s.beam_a.wavelength, s.n_clad);
        p.a = normalize(solve_he11(ga), s.quantization_length, s.quadrature);
        if (s.degenerate()) {
            p.b = p.a;
        } else {
            const auto gb = WaveguideGeometry::silica(s.diameter, s.beam_b.wavelength, s.n_clad);
            p.b = normalize(solve_he11(gb), s.quantization_length, s.quadrature);
        }
        p.field4 = field4_exterior_integral(p.a, p.b, s.beam_a.power, s.beam_b.power, s.taper_length,
                                            s.power_velocity, s.quadrature);
        return p;
    });
}

inline TpaResult assemble(const TpaScenario& s, const PreparedScenario& p)
{
    TpaResult r;
    r.field4_integral = p.field4;
    r.r2_total = rate_prefactor(s.atom) * orientation_factor(s.orientation) * s.density * p.field4;
    const double a = fractional_absorption(r.r2_total, s);
    r.saturation_warning = a > saturation_threshold;
    r.absorption_fraction = std::min(a, 1.0);
    r.mode_a = summarize(p.a);
    r.mode_b = summarize(p.b);
    return r;
}

} // namespace detail

/// Volume-integrated steady-state rate
///   R2 = 64 d1^2 d2^2 / (hbar^4 (4 Delta^2 + Gamma1^2) Gamma2) rho_A L int |E_a|^2 |E_b|^2 dA
inline TpaResult total_rate(const TpaScenario& s)
{
    return detail::assemble(s, detail::prepare(s));
}

/// Atom parameters with couplings m1 = d1 |E_a|, m2 = d2 |E_b| taken at the
/// outer fiber surface (phi = 0), where the evanescent field peaks.
inline AtomParams surface_atom_params(const TpaScenario& s)
{
    s.validate();
    return detail::with_context(s, [&] {
        const auto p = detail::prepare(s);
        const auto field = [&](const NormalizedMode& nm, double power) {
            return std::sqrt(classical_amplitude_sq(nm, power, s.power_velocity)
                             * radial_profile(nm.mode, nm.mode.a).intensity(0.0));
        };
        AtomParams atom = s.atom;
        atom.m1 = s.atom.d1 * field(p.a, s.beam_a.power);
        atom.m2 = s.atom.d2 * field(p.b, s.beam_b.power);
        return atom;
    });
}

struct DiameterSweep {
    ResultTable table{{"diameter_nm", "r2_per_s", "absorption_fraction", "evanescent_fraction", "n_eff",
                       "single_mode"}};
    double argmax_diameter = std::numeric_limits<double>::quiet_NaN(); // m
    double max_rate = std::numeric_limits<double>::quiet_NaN();
    bool interior_maximum = false;
};

inline std::vector<double> diameter_grid(double d_min, double d_max, double step)
{
    if (!(d_min > 0.0 && d_min < d_max))
        throw domain_error("diameter sweep needs 0 < d_min < d_max");
    if (!(step > 0.0))
        throw domain_error("diameter sweep step must be positive");
    const auto count = static_cast<std::size_t>(std::floor((d_max - d_min) / step + 1e-9)) + 1;
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i)
        grid[i] = d_min + static_cast<double>(i) * step;
    return grid;
}

/// Rate versus taper diameter. Diameters without a guided root become NaN
/// rows. A maximum strictly inside the grid is refined by golden-section
/// search to well under 0.5 nm.
inline DiameterSweep sweep_diameter(const TpaScenario& s, double d_min, double d_max, double step,
                                    unsigned threads = 1)
{
    const auto grid = diameter_grid(d_min, d_max, step);
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    const auto rows = parallel_map(grid.size(), threads, [&](std::size_t i) -> std::vector<double> {
        TpaScenario at = s;
        at.diameter = grid[i];
        try {
            const auto r = total_rate(at);
            return {grid[i] * 1e9, r.r2_total, r.absorption_fraction, r.mode_a.evanescent_fraction, r.mode_a.n_eff,
                    r.mode_a.single_mode ? 1.0 : 0.0};
        } catch (const numeric_error&) {
            return {grid[i] * 1e9, nan, nan, nan, nan, nan};
        }
    });

    DiameterSweep out;
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.table.add_row(rows[i]);
        if (std::isfinite(rows[i][1]) && (!best || rows[i][1] > rows[*best][1]))
            best = i;
    }
    if (!best)
        return out;

    const std::size_t k = *best;
    out.argmax_diameter = grid[k];
    out.max_rate = rows[k][1];
    out.interior_maximum = k > 0 && k + 1 < rows.size() && std::isfinite(rows[k - 1][1])
        && std::isfinite(rows[k + 1][1]);
    if (!out.interior_maximum)
        return out;

    const auto rate_at = [&](double d) {
        TpaScenario at = s;
        at.diameter = d;
        return total_rate(at).r2_total;
    };
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = grid[k - 1];
    double hi = grid[k + 1];
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = rate_at(x1);
    double f2 = rate_at(x2);
    while (hi - lo > 0.05e-9) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = rate_at(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = rate_at(x1);
        }
    }
    out.argmax_diameter = 0.5 * (lo + hi);
    out.max_rate = std::max({f1, f2, out.max_rate});
    return out;
}

enum class Spacing { linear, log };

inline std::vector<double> detuning_grid(double delta_min, double delta_max, int points, Spacing spacing)
{
    if (!(delta_min > 0.0 && delta_min < delta_max))
        throw domain_error("detuning sweep needs 0 < delta_min < delta_max");
    if (points < 2)
        throw domain_error("detuning sweep needs at least two points");
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double f = static_cast<double>(i) / (points - 1);
        grid[static_cast<std::size_t>(i)] = spacing == Spacing::linear
            ? delta_min + f * (delta_max - delta_min)
            : delta_min * std::pow(delta_max / delta_min, f);
    }
    grid.back() = delta_max;
    return grid;
}

/// Rate and fractional absorption versus detuning (rad/s). With
/// `two_color`, each point re-tunes the beam pair via two_color_wavelengths
/// around `degenerate_wavelength`; otherwise the beams stay fixed and only
/// the atomic detuning moves.
inline ResultTable sweep_detuning(const TpaScenario& s, double delta_min, double delta_max, int points,
                                  Spacing spacing, bool two_color, double degenerate_wavelength,
                                  unsigned threads = 1)
{
    const auto grid = detuning_grid(delta_min, delta_max, points, spacing);
    ResultTable table({"delta_rad_per_s", "r2_per_s", "absorption_fraction"});
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();

    if (!two_color) {
        const auto prepared = detail::prepare(s);
        for (double delta : grid) {
            TpaScenario at = s;
            at.atom.delta = delta;
            const auto r = detail::assemble(at, prepared);
            table.add_row({delta, r.r2_total, r.absorption_fraction});
        }
        return table;
    }

    const auto rows = parallel_map(grid.size(), threads, [&](std::size_t i) -> std::vector<double> {
        try {
            const auto r = total_rate(with_two_color(s, grid[i], degenerate_wavelength));
            return {grid[i], r.r2_total, r.absorption_fraction};
        } catch (const numeric_error&) {
            return {grid[i], nan, nan};
        }
    });
    for (const auto& row : rows)
        table.add_row(row);
    return table;
}

} // namespace taper_tpa

#endif // TAPER_TPA_TPA_ENGINE_HPP
