#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "taper_tpa/ode.hpp"

using namespace taper_tpa;
using Vec2 = Eigen::Vector2d;
using Vec1c = Eigen::Matrix<std::complex<double>, 1, 1>;

TEST(Ode, ExponentialDecay)
{
    const std::vector<double> t{0.0, 0.5, 1.0, 3.0};
    const auto y = ode::integrate<Eigen::VectorXd>([](double, const Eigen::VectorXd& v) { return (-2.0 * v).eval(); },
                                                   Eigen::VectorXd::Constant(1, 1.0), t, {1e-13, 1e-16});
    ASSERT_EQ(y.size(), t.size());
    for (std::size_t k = 0; k < t.size(); ++k)
        EXPECT_NEAR(y[k](0), std::exp(-2.0 * t[k]), 1e-12);
}

TEST(Ode, HarmonicOscillatorConservesEnergy)
{
    std::vector<double> t;
    for (int k = 0; k <= 100; ++k)
        t.push_back(0.5 * k);
    ode::Stats stats;
    const auto y = ode::integrate<Vec2>([](double, const Vec2& v) { return Vec2(v(1), -v(0)); }, Vec2(1.0, 0.0), t,
                                        {}, &stats);
    for (std::size_t k = 0; k < t.size(); ++k) {
        EXPECT_NEAR(y[k](0), std::cos(t[k]), 1e-9);
        EXPECT_NEAR(y[k](1), -std::sin(t[k]), 1e-9);
    }
    EXPECT_GT(stats.accepted, 0);
}

TEST(Ode, ComplexRotatingPhase)
{
    const double w = 40.0;
    const std::vector<double> t{0.0, 1.0, 2.0};
    const std::complex<double> i{0.0, 1.0};
    const auto y = ode::integrate<Vec1c>([&](double, const Vec1c& v) { return (-i * w * v).eval(); },
                                         Vec1c::Constant(1.0), t);
    for (std::size_t k = 0; k < t.size(); ++k)
        EXPECT_LT(std::abs(y[k](0) - std::exp(-i * w * t[k])), 1e-8);
}

TEST(Ode, LandsExactlyOnOutputTimes)
{
    // y' = 1 is integrated exactly, so any drift in t shows up in y
    const std::vector<double> t{0.0, 0.1, 0.1, 0.7, 2.3};
    const auto y = ode::integrate<Eigen::VectorXd>([](double, const Eigen::VectorXd&) { return Eigen::VectorXd::Ones(1); },
                                                   Eigen::VectorXd::Zero(1), t);
    for (std::size_t k = 0; k < t.size(); ++k)
        EXPECT_NEAR(y[k](0), t[k], 1e-14);
}

TEST(Ode, RejectsDecreasingTimes)
{
    const std::vector<double> t{0.0, 1.0, 0.5};
    EXPECT_THROW(ode::integrate<Eigen::VectorXd>([](double, const Eigen::VectorXd& v) { return v; },
                                                 Eigen::VectorXd::Ones(1), t),
                 domain_error);
}

TEST(Ode, StepBudgetExhaustion)
{
    const std::vector<double> t{0.0, 100.0};
    ode::Tolerances tol;
    tol.max_steps = 5;
    EXPECT_THROW(ode::integrate<Vec2>([](double, const Vec2& v) { return Vec2(v(1), -v(0)); }, Vec2(1.0, 0.0), t, tol),
                 numeric_error);
}
