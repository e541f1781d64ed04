#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracle/frozen_values.hpp"
#include "oracle/monte_carlo.hpp"
#include "taper_tpa/mode_field.hpp"
#include "taper_tpa/verify.hpp"

using namespace taper_tpa;

namespace {

const ModeSolution& nominal_mode()
{
    static const ModeSolution m = solve_he11(WaveguideGeometry::silica(350e-9, 778.1e-9));
    return m;
}

} // namespace

TEST(ModeField, InterfaceConditionsAcrossDiameters)
{
    for (double d = 200e-9; d <= 600e-9; d += 25e-9) {
        const auto m = solve_fundamental(WaveguideGeometry::silica(d, 778.1e-9));
        const auto jump = interface_mismatch(m);
        EXPECT_LE(jump.e_z, 1e-6) << d;
        EXPECT_LE(jump.e_phi, 1e-6) << d;
        EXPECT_LE(jump.d_r, 1e-6) << d;
    }
}

TEST(ModeField, FieldPhasesAndSymmetry)
{
    const auto& m = nominal_mode();
    const auto f = field_at(m, 0.5 * m.a, 0.3);
    EXPECT_EQ(f.e_r.real(), 0.0);
    EXPECT_EQ(f.e_phi.real(), 0.0);
    EXPECT_EQ(f.e_z.imag(), 0.0);
    const auto p = radial_profile(m, 1.3 * m.a);
    EXPECT_NEAR(p.intensity(0.4), p.intensity(std::numbers::pi - 0.4), 1e-14 * p.intensity(0.4));
    EXPECT_NEAR(field_at(m, 1.3 * m.a, 0.4).magnitude_sq(), p.intensity(0.4), 1e-14 * p.intensity(0.4));
    EXPECT_THROW(radial_profile(m, -1e-9), domain_error);
}

TEST(ModeField, NormIntegralMatchesOracle)
{
    const double n = norm_integral(nominal_mode());
    EXPECT_NEAR(n / frozen::norm_integral, 1.0, 1e-9);
    EXPECT_NEAR(evanescent_fraction(nominal_mode()), frozen::evanescent_fraction, 1e-9);
}

TEST(ModeField, EvanescentFractionShrinksWithDiameter)
{
    double prev = 1.0;
    for (double d : {250e-9, 350e-9, 450e-9, 550e-9}) {
        const double eta = evanescent_fraction(solve_fundamental(WaveguideGeometry::silica(d, 778.1e-9)));
        EXPECT_GT(eta, 0.0);
        EXPECT_LT(eta, prev);
        prev = eta;
    }
}

TEST(ModeField, PhotonEnergyNormalization)
{
    for (double lq : {1.0, 1e-3, 42.0}) {
        const auto nm = normalize(nominal_mode(), lq);
        EXPECT_NEAR(nm.photon_energy() / (PhysicalConstants::hbar * nominal_mode().omega()), 1.0, 1e-13);
    }
}

TEST(ModeField, SurfaceFieldAtOneMilliwatt)
{
    const auto nm = normalize(nominal_mode());
    const double e2 = radial_profile(nominal_mode(), nominal_mode().a).intensity(0.0);
    EXPECT_NEAR(classical_amplitude_sq(nm, 1e-3, PowerVelocity::phase) * e2 / frozen::surface_field_sq_phase, 1.0,
                1e-8);
    EXPECT_NEAR(classical_amplitude_sq(nm, 1e-3, PowerVelocity::group) * e2 / frozen::surface_field_sq_group, 1.0,
                1e-7);
    EXPECT_EQ(classical_amplitude_sq(nm, 0.0), 0.0);
    EXPECT_THROW(classical_amplitude_sq(nm, -1.0), domain_error);
}

TEST(ModeField, QuantizationLengthCancelsInClassicalField)
{
    const double a = classical_amplitude_sq(normalize(nominal_mode(), 1.0), 1e-3);
    const double b = classical_amplitude_sq(normalize(nominal_mode(), 1e-4), 1e-3);
    EXPECT_NEAR(a / b, 1.0, 1e-12);
}

TEST(ModeField, GroupVelocityRequiresSolvedVelocity)
{
    const auto m = solve_fundamental(WaveguideGeometry::silica(350e-9, 778.1e-9));
    EXPECT_THROW(transport_velocity(m, PowerVelocity::group), domain_error);
}

TEST(ModeField, MonteCarloEnergyIntegral)
{
    const auto& m = nominal_mode();
    std::mt19937_64 rng(20240611);
    const double n1sq = m.geometry.n_core * m.geometry.n_core;
    const auto e2 = [&](double r, double phi) { return radial_profile(m, r).intensity(phi); };
    const auto inner = mc::disk(e2, m.a, 1000, 500, rng);
    const auto outer = mc::tail([&](double r, double phi) { return e2(std::max(r, m.a), phi); }, m.a, 2.0 * m.q(),
                                1000, 500, rng);
    const double estimate = PhysicalConstants::eps0 * (n1sq * inner.value + outer.value);
    EXPECT_NEAR(estimate / norm_integral(m), 1.0, 0.01);
}

TEST(ModeField, MonteCarloFourthPowerIntegral)
{
    const auto& m = nominal_mode();
    std::mt19937_64 rng(7);
    QuadratureOptions opt;
    const quadrature::GaussLegendre rule(opt.order);
    const auto ring4 = [&](double r) {
        const auto p = radial_profile(m, r);
        return r * quadrature::periodic_trapezoid([&](double phi) { return std::pow(p.intensity(phi), 2); }, 128);
    };
    const double quad = quadrature::integrate_tail(ring4, m.a, 0.05 * m.a, 0.5 / m.q(), rule, 1e-14).value;
    const auto est = mc::tail([&](double r, double phi) { return std::pow(radial_profile(m, r).intensity(phi), 2); },
                              m.a, 4.0 * m.q(), 1000, 1000, rng);
    EXPECT_NEAR(est.value / quad, 1.0, 0.01);
    EXPECT_LT(est.std_error / est.value, 1e-3);
}
