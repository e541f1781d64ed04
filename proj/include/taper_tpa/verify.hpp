#ifndef TAPER_TPA_VERIFY_HPP
#define TAPER_TPA_VERIFY_HPP

// Invariant suite run by `taper_tpa verify`. Each check reports a name,
// pass/fail and a one-line detail with the measured quantity.

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "taper_tpa/atom_dynamics.hpp"
#include "taper_tpa/mode_field.hpp"
#include "taper_tpa/mode_solver.hpp"
#include "taper_tpa/specfun.hpp"
#include "taper_tpa/tpa_engine.hpp"

namespace taper_tpa {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

inline double relative_difference(double a, double b)
{
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

struct InterfaceMismatch {
    double e_z = 0.0;
    double e_phi = 0.0;
    double d_r = 0.0; // n^2 E_r

    double worst() const { return std::max({e_z, e_phi, d_r}); }
};

/// Relative jumps of the tangential field and the normal displacement across r = a.
inline InterfaceMismatch interface_mismatch(const ModeSolution& m)
{
    const auto in = radial_profile(m, std::nextafter(m.a, 0.0));
    const auto out = radial_profile(m, m.a);
    const double n1 = m.geometry.n_core;
    const double n2 = m.geometry.n_clad;
    return {relative_difference(in.axial, out.axial), relative_difference(in.azimuthal, out.azimuthal),
            relative_difference(n1 * n1 * in.radial, n2 * n2 * out.radial)};
}

struct ProfileComparison {
    double ratio = 0.0;       // least-squares c in ode ~ c * closed_form
    double correlation = 0.0; // Pearson
};

/// Compares the closed-form p2(t) against the integrated weak-coupling
/// profile over `points` samples in (0, t_max].
inline ProfileComparison compare_closed_form(const AtomParams& p, double t_max, int points)
{
    const auto grid = linear_grid(t_max, points + 1);
    const auto ode = perturbative_p2_profile(p, grid);
    const double field4 = std::norm(p.m1) * std::norm(p.m2) / (p.d1 * p.d1 * p.d2 * p.d2);
    std::vector<double> x, y;
    for (std::size_t k = 1; k < grid.size(); ++k) {
        x.push_back(analytic_p2(p, field4, grid[k]));
        y.push_back(ode[k]);
    }
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sx += x[k];
        sy += y[k];
        sxx += x[k] * x[k];
        syy += y[k] * y[k];
        sxy += x[k] * y[k];
    }
    const double cov = sxy - sx * sy / n;
    const double vx = sxx - sx * sx / n;
    const double vy = syy - sy * sy / n;
    return {sxy / sxx, cov / std::sqrt(vx * vy)};
}

namespace detail {

inline std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

inline CheckResult run_check(const std::string& name, const std::function<CheckResult()>& body)
{
    try {
        auto r = body();
        r.name = name;
        return r;
    } catch (const std::exception& e) {
        return {name, false, std::string("threw: ") + e.what()};
    }
}

} // namespace detail

inline std::vector<CheckResult> run_invariant_suite(const TpaScenario& nominal = nominal_scenario())
{
    using detail::fmt;
    std::vector<CheckResult> out;
    const auto add = [&](const std::string& name, const std::function<CheckResult()>& body) {
        out.push_back(detail::run_check(name, body));
    };

    add("bessel reference values", [] {
        const double j[] = {0.7651976865579666, 0.44005058574493355, 0.11490348493190049};
        const double k[] = {0.42102443824070834, 0.6019072301972346, 1.6248388986351774};
        double worst = 0.0;
        for (int n = 0; n < 3; ++n) {
            worst = std::max(worst, relative_difference(specfun::bessel_j(n, 1.0), j[n]));
            worst = std::max(worst, relative_difference(specfun::bessel_k(n, 1.0), k[n]));
        }
        return CheckResult{{}, worst < 1e-13, "max relative error " + fmt(worst)};
    });

    add("bessel derivative identities", [] {
        double worst = 0.0;
        for (double x : {0.3, 1.0, 2.5, 7.0}) {
            const double h = 1e-5 * x;
            const double fj = (specfun::bessel_j(1, x + h) - specfun::bessel_j(1, x - h)) / (2 * h);
            const double fk = (specfun::bessel_k(1, x + h) - specfun::bessel_k(1, x - h)) / (2 * h);
            worst = std::max(worst, relative_difference(specfun::bessel_j1_prime(x), fj));
            worst = std::max(worst, relative_difference(specfun::bessel_k1_prime(x), fk));
        }
        return CheckResult{{}, worst < 1e-7, "max relative deviation from central difference " + fmt(worst)};
    });

    const auto geometry = WaveguideGeometry::silica(nominal.diameter, nominal.beam_a.wavelength, nominal.n_clad);

    add("mode root and U^2 + W^2 = V^2", [&] {
        const auto m = solve_fundamental(geometry);
        const double closure = relative_difference(m.U * m.U + m.W * m.W, m.V * m.V);
        const bool bounded = m.n_eff > geometry.n_clad && m.n_eff < geometry.n_core;
        return CheckResult{{}, closure < 1e-10 && bounded,
                           "n_eff " + fmt(m.n_eff) + ", closure error " + fmt(closure)};
    });

    add("interface continuity", [&] {
        double worst = 0.0;
        for (double d : {250e-9, 350e-9, 500e-9})
            worst = std::max(worst, interface_mismatch(solve_fundamental(WaveguideGeometry::silica(d, geometry.wavelength, geometry.n_clad))).worst());
        return CheckResult{{}, worst < 1e-6, "max relative jump " + fmt(worst)};
    });

    add("evanescent fraction in (0, 1)", [&] {
        const double eta = evanescent_fraction(solve_fundamental(geometry));
        return CheckResult{{}, eta > 0.0 && eta < 1.0, "eta " + fmt(eta)};
    });

    add("density matrix trace, hermiticity, positivity", [&] {
        AtomParams p = surface_atom_params(nominal);
        const auto grid = linear_grid(5.0 / p.gamma1, 50);
        const auto rho = evolve_density(DensityMatrix4::basis_state(3), p, grid);
        double trace_rise = 0.0, herm = 0.0, min_eig = 1.0;
        for (std::size_t k = 0; k < rho.size(); ++k) {
            if (k > 0)
                trace_rise = std::max(trace_rise, rho[k].trace() - rho[k - 1].trace());
            herm = std::max(herm, rho[k].hermiticity_error());
            min_eig = std::min(min_eig, rho[k].min_eigenvalue());
        }
        const bool ok = trace_rise < 1e-12 && herm < 1e-12 && min_eig > -1e-10;
        return CheckResult{{}, ok,
                           "trace rise " + fmt(trace_rise) + ", hermiticity " + fmt(herm) + ", min eigenvalue "
                               + fmt(min_eig)};
    });

    add("unitary limit conserves trace", [&] {
        AtomParams p = surface_atom_params(nominal);
        p.gamma1 = p.gamma2 = 0.0;
        const auto grid = linear_grid(2e-9, 20);
        const auto rho = evolve_density(DensityMatrix4::basis_state(3), p, grid);
        double drift = 0.0;
        for (const auto& r : rho)
            drift = std::max(drift, std::abs(r.trace() - 1.0));
        return CheckResult{{}, drift < 1e-9, "max trace drift " + fmt(drift)};
    });

    add("pure-state factorization", [&] {
        const AtomParams p = surface_atom_params(nominal);
        const double err = verify_factorization(p, 10.0 / p.gamma1, 40);
        return CheckResult{{}, err < 1e-7, "max |rho - alpha alpha^dagger| " + fmt(err)};
    });

    add("steady state matches rate prefactor", [&] {
        const AtomParams p = surface_atom_params(nominal);
        const double t = 60.0 / std::min(p.gamma1, p.gamma2);
        const double field4 = std::norm(p.m1) * std::norm(p.m2) / (p.d1 * p.d1 * p.d2 * p.d2);
        const double ode_rate = perturbative_p2(p, t) * p.gamma2;
        const double rel = relative_difference(ode_rate, local_steady_rate(p, field4));
        return CheckResult{{}, rel < 1e-6, "relative difference " + fmt(rel)};
    });

    add("closed-form p2(t) profile factor", [&] {
        const AtomParams p = surface_atom_params(nominal);
        const auto cmp = compare_closed_form(p, 10.0 / p.gamma1, 400);
        return CheckResult{{}, cmp.correlation > 0.999,
                           "ode / closed form = " + fmt(cmp.ratio) + " (correlation " + fmt(cmp.correlation)
                               + "); the closed form is 4x below the integrated and steady-state rates"};
    });

    const auto base = total_rate(nominal);

    add("absorption fraction consistency", [&] {
        const double hbar_omega_sum = PhysicalConstants::hbar
            * (wavelength_to_omega(nominal.beam_a.wavelength) + wavelength_to_omega(nominal.beam_b.wavelength));
        const double expect = hbar_omega_sum * base.r2_total / (nominal.beam_a.power + nominal.beam_b.power);
        const double rel = relative_difference(base.absorption_fraction, std::min(expect, 1.0));
        return CheckResult{{}, rel < 1e-10, "A " + fmt(base.absorption_fraction) + ", relative error " + fmt(rel)};
    });

    add("quantization length cancels", [&] {
        auto s = nominal;
        s.quantization_length = 1e-3;
        const double rel = relative_difference(total_rate(s).r2_total, base.r2_total);
        return CheckResult{{}, rel < 1e-10, "relative change " + fmt(rel)};
    });

    add("linear in density and length, quadratic in power", [&] {
        auto s = nominal;
        s.density *= 3.0;
        const double dens = relative_difference(total_rate(s).r2_total, 3.0 * base.r2_total);
        s = nominal;
        s.taper_length *= 2.0;
        const double len = relative_difference(total_rate(s).r2_total, 2.0 * base.r2_total);
        s = nominal;
        s.beam_a.power *= 2.0;
        s.beam_b.power *= 2.0;
        const double pow = relative_difference(total_rate(s).r2_total, 4.0 * base.r2_total);
        const double worst = std::max({dens, len, pow});
        return CheckResult{{}, worst < 1e-10, "max relative deviation " + fmt(worst)};
    });

    return out;
}

} // namespace taper_tpa

#endif // TAPER_TPA_VERIFY_HPP
