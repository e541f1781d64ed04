#ifndef TAPER_TPA_TESTS_MONTE_CARLO_HPP
#define TAPER_TPA_TESTS_MONTE_CARLO_HPP

// Stratified Monte Carlo estimates of cross-section integrals, used as an
// independent check on the Gauss-Legendre/trapezoid quadrature. The exterior
// is mapped to the unit interval with r = r0 - ln(u) / k, which samples the
// exponential tail of the integrand.

#include <cmath>
#include <numbers>
#include <random>

namespace mc {

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

/// Integral of f(r, phi) r dr dphi over [0, a] x [0, 2 pi) on an n_r x n_phi
/// grid of strata, one uniform sample per stratum.
template <class F>
Estimate disk(F&& f, double a, int n_r, int n_phi, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double cell = (a / n_r) * (2.0 * std::numbers::pi / n_phi);
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n_r; ++i)
        for (int j = 0; j < n_phi; ++j) {
            const double r = a * (i + u(rng)) / n_r;
            const double phi = 2.0 * std::numbers::pi * (j + u(rng)) / n_phi;
            const double v = f(r, phi) * r * cell;
            sum += v;
            sum_sq += v * v;
        }
    const double n = static_cast<double>(n_r) * n_phi;
    return {sum, std::sqrt(std::max(0.0, sum_sq - sum * sum / n))};
}

/// Integral of f(r, phi) r dr dphi over [r0, inf) x [0, 2 pi), sampling
/// r with density k exp(-k (r - r0)).
template <class F>
Estimate tail(F&& f, double r0, double k, int n_u, int n_phi, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double cell = (1.0 / n_u) * (2.0 * std::numbers::pi / n_phi);
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n_u; ++i)
        for (int j = 0; j < n_phi; ++j) {
            const double s = (i + 1.0 - u(rng)) / n_u; // (0, 1]
            const double r = r0 - std::log(s) / k;
            const double phi = 2.0 * std::numbers::pi * (j + u(rng)) / n_phi;
            const double v = f(r, phi) * r / (k * s) * cell;
            sum += v;
            sum_sq += v * v;
        }
    const double n = static_cast<double>(n_u) * n_phi;
    return {sum, std::sqrt(std::max(0.0, sum_sq - sum * sum / n))};
}

} // namespace mc

#endif
