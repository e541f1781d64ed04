#include <cmath>

#include <gtest/gtest.h>

#include "taper_tpa/units.hpp"

using namespace taper_tpa;

TEST(Units, ConstantsArePositive)
{
    EXPECT_GT(PhysicalConstants::c, 0.0);
    EXPECT_GT(PhysicalConstants::hbar, 0.0);
    EXPECT_GT(PhysicalConstants::e_charge, 0.0);
    EXPECT_GT(PhysicalConstants::eps0, 0.0);
    EXPECT_EQ(PhysicalConstants::c, 299792458.0);
}

TEST(Units, OmegaAt778nm)
{
    EXPECT_NEAR(wavelength_to_omega(778.1e-9), 2.42083481211779e15, 1e-13 * 2.42e15);
    EXPECT_NEAR(PhysicalConstants::hbar * wavelength_to_omega(778.1e-9), 2.55294416647191e-19, 1e-32);
}

TEST(Units, WavelengthRoundTrip)
{
    for (double lam : {400e-9, 778.1e-9, 1550e-9}) {
        const double back = omega_to_wavelength(wavelength_to_omega(lam));
        EXPECT_LE(std::abs(back - lam) / lam, 4e-16);
    }
}

TEST(Units, NominalDetuningFromWavelengthOffset)
{
    const double d = detuning_wavelength_to_angular(2.1e-9, 778.1e-9);
    EXPECT_NEAR(d, 6.53354723743396e12, 1e-12 * d);
    // the quoted 6.54e12 rad/s is the same offset to three figures
    EXPECT_NEAR(d / 6.54e12, 1.0, 1.5e-3);
}

TEST(Units, DipoleFromRadius)
{
    EXPECT_NEAR(dipole_from_radius(0.223e-9), 3.57285389382e-29, 1e-39);
    EXPECT_NEAR(dipole_from_radius(0.0492e-9), 7.88270903928e-30, 1e-40);
}

TEST(Units, DomainErrors)
{
    EXPECT_THROW(wavelength_to_omega(0.0), domain_error);
    EXPECT_THROW(wavelength_to_omega(-1e-6), domain_error);
    EXPECT_THROW(omega_to_wavelength(0.0), domain_error);
    EXPECT_THROW(dipole_from_radius(0.0), domain_error);
    EXPECT_THROW(detuning_wavelength_to_angular(1e-9, 0.0), domain_error);
}

TEST(Units, BeamValidation)
{
    EXPECT_NO_THROW((BeamSpec{778.1e-9, 1e-3, Direction::forward}.validate()));
    EXPECT_NO_THROW((BeamSpec{778.1e-9, 0.0, Direction::backward}.validate()));
    EXPECT_THROW((BeamSpec{399e-9, 1e-3}.validate()), domain_error);
    EXPECT_THROW((BeamSpec{1601e-9, 1e-3}.validate()), domain_error);
    EXPECT_THROW((BeamSpec{778.1e-9, -1e-3}.validate()), domain_error);
}
