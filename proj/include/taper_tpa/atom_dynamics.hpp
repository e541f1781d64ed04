#ifndef TAPER_TPA_ATOM_DYNAMICS_HPP
#define TAPER_TPA_ATOM_DYNAMICS_HPP

// Three-level atom coupled to two counter-propagating photons, in the basis
//   |1> = |0> (x) |h>,   |2> = a+_beta |0> (x) |i>,
//   |3> = a+_-beta |0> (x) |i>,   |4> = a+_beta a+_-beta |0> (x) |g>.
// Population decay enters through the anticommutator with
// Gamma = diag(Gamma2, Gamma1, Gamma1, 0), so the trace leaks out of the
// four-state space.
//
// Time is rescaled internally by the fastest rate in the problem so the
// integrator sees O(1) frequencies.

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "taper_tpa/errors.hpp"
#include "taper_tpa/ode.hpp"
#include "taper_tpa/units.hpp"

namespace taper_tpa {

using Complex = std::complex<double>;
using Matrix4c = Eigen::Matrix<Complex, 4, 4>;
using Vector4c = Eigen::Matrix<Complex, 4, 1>;

struct AtomParams {
    double d1 = 0.0;     // |g> -> |i> dipole, C m
    double d2 = 0.0;     // |i> -> |h> dipole, C m
    double gamma1 = 0.0; // |i> population decay, 1/s
    double gamma2 = 0.0; // |h> population decay, 1/s
    double delta = 0.0;  // intermediate-state detuning, rad/s
    Complex m1{};        // coupling matrix elements, J
    Complex m2{};

    /// Real couplings m_k = d_k |E_local|.
    static AtomParams with_local_field(double d1, double d2, double gamma1, double gamma2, double delta,
                                       double field_magnitude)
    {
        return {d1, d2, gamma1, gamma2, delta, d1 * field_magnitude, d2 * field_magnitude};
    }

    void validate() const
    {
        if (!(gamma1 >= 0.0 && gamma2 >= 0.0))
            throw domain_error("decay rates must be non-negative");
        if (!(d1 >= 0.0 && d2 >= 0.0))
            throw domain_error("dipole moments must be non-negative");
        if (!std::isfinite(delta) || !std::isfinite(std::abs(m1)) || !std::isfinite(std::abs(m2)))
            throw domain_error("detuning and couplings must be finite");
    }
};

/// Diagonal of the decay operator over the four basis states.
inline Eigen::Vector4d decay_diagonal(const AtomParams& p)
{
    return {p.gamma2, p.gamma1, p.gamma1, 0.0};
}

struct DensityMatrix4 {
    Matrix4c rho = Matrix4c::Zero();

    static DensityMatrix4 basis_state(int k)
    {
        DensityMatrix4 d;
        d.rho(k, k) = 1.0;
        return d;
    }

    double trace() const { return rho.trace().real(); }
    double population(int k) const { return rho(k, k).real(); }
    double hermiticity_error() const { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }

    double min_eigenvalue() const
    {
        const Matrix4c herm = 0.5 * (rho + rho.adjoint());
        Eigen::SelfAdjointEigenSolver<Matrix4c> solver(herm, Eigen::EigenvaluesOnly);
        return solver.eigenvalues().minCoeff();
    }
};

struct AmplitudeVector4 {
    Vector4c alpha = Vector4c::Zero();

    /// Atom in the ground state with one photon in each beam.
    static AmplitudeVector4 ground()
    {
        AmplitudeVector4 a;
        a.alpha(3) = 1.0;
        return a;
    }

    double norm_sq() const { return alpha.squaredNorm(); }
    DensityMatrix4 outer() const { return {alpha * alpha.adjoint()}; }
};

/// Interaction-picture Hamiltonian in the four-state basis (J).
inline Matrix4c interaction_matrix(const AtomParams& p, double t)
{
    const Complex up = std::polar(1.0, p.delta * t);   // e^{+i Delta t}
    const Complex down = std::polar(1.0, -p.delta * t); // e^{-i Delta t}
    const Complex m1 = p.m1;
    const Complex m2 = p.m2;
    Matrix4c h = Matrix4c::Zero();
    h(0, 1) = std::conj(m2) * up;
    h(0, 2) = m2 * up;
    h(1, 0) = m2 * down;
    h(1, 3) = m1 * down;
    h(2, 0) = std::conj(m2) * down;
    h(2, 3) = std::conj(m1) * down;
    h(3, 1) = std::conj(m1) * up;
    h(3, 2) = m1 * up;
    return h;
}

namespace detail {

/// Fastest angular rate in the problem; time is integrated in units of 1/rate.
inline double time_scale_rate(const AtomParams& p)
{
    const double hbar = PhysicalConstants::hbar;
    const double rate = std::max({p.gamma1, p.gamma2, std::abs(p.delta), std::abs(p.m1) / hbar,
                                  std::abs(p.m2) / hbar});
    return rate > 0.0 ? rate : 1.0;
}

inline std::vector<double> scaled_times(std::span<const double> t_grid, double rate)
{
    std::vector<double> tau(t_grid.size());
    std::transform(t_grid.begin(), t_grid.end(), tau.begin(), [rate](double t) { return t * rate; });
    return tau;
}

inline void check_grid(std::span<const double> t_grid)
{
    if (t_grid.empty())
        throw domain_error("time grid must not be empty");
    if (!std::is_sorted(t_grid.begin(), t_grid.end()))
        throw domain_error("time grid must be non-decreasing");
}

} // namespace detail

inline ode::Tolerances default_dynamics_tolerances()
{
    return {1e-10, 1e-14};
}

/// Component form of d rho/dt = -(i/hbar)[H, rho] - {Gamma, rho}/2.
inline std::vector<DensityMatrix4> evolve_density(const DensityMatrix4& rho0, const AtomParams& p,
                                                  std::span<const double> t_grid,
                                                  const ode::Tolerances& tol = default_dynamics_tolerances())
{
    p.validate();
    detail::check_grid(t_grid);
    if (rho0.hermiticity_error() > 1e-12)
        throw domain_error("evolve_density: initial density matrix is not Hermitian");
    if (rho0.min_eigenvalue() < -1e-10 || rho0.trace() > 1.0 + 1e-12)
        throw domain_error("evolve_density: initial density matrix must be positive semidefinite with trace <= 1");

    const double rate = detail::time_scale_rate(p);
    const Eigen::Vector4d gamma = decay_diagonal(p) / rate;
    const double inv = 1.0 / (PhysicalConstants::hbar * rate);
    const Complex minus_i{0.0, -1.0};
    const auto rhs = [&](double tau, const Matrix4c& rho) -> Matrix4c {
        const Matrix4c h = interaction_matrix(p, tau / rate) * inv;
        Matrix4c d = minus_i * (h * rho - rho * h);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                d(i, j) -= 0.5 * (gamma(i) + gamma(j)) * rho(i, j);
        return d;
    };
    const auto tau = detail::scaled_times(t_grid, rate);
    const auto states = ode::integrate<Matrix4c>(rhs, rho0.rho, tau, tol);
    std::vector<DensityMatrix4> out;
    out.reserve(states.size());
    for (const auto& s : states)
        out.push_back({s});
    return out;
}

/// d alpha_i/dt = (1/(i hbar)) sum_j H_ij alpha_j - Gamma_i alpha_i / 2.
inline std::vector<AmplitudeVector4> evolve_amplitudes(const AmplitudeVector4& alpha0, const AtomParams& p,
                                                       std::span<const double> t_grid,
                                                       const ode::Tolerances& tol = default_dynamics_tolerances())
{
    p.validate();
    detail::check_grid(t_grid);
    const double rate = detail::time_scale_rate(p);
    const Eigen::Vector4d gamma = decay_diagonal(p) / rate;
    const double inv = 1.0 / (PhysicalConstants::hbar * rate);
    const Complex minus_i{0.0, -1.0};
    const auto rhs = [&](double tau, const Vector4c& a) -> Vector4c {
        Vector4c d = minus_i * inv * (interaction_matrix(p, tau / rate) * a);
        for (int i = 0; i < 4; ++i)
            d(i) -= 0.5 * gamma(i) * a(i);
        return d;
    };
    const auto tau = detail::scaled_times(t_grid, rate);
    const auto states = ode::integrate<Vector4c>(rhs, alpha0.alpha, tau, tol);
    std::vector<AmplitudeVector4> out;
    out.reserve(states.size());
    for (const auto& s : states)
        out.push_back({s});
    return out;
}

inline std::vector<double> linear_grid(double t_max, int points)
{
    if (points < 2)
        throw domain_error("a time grid needs at least two points");
    std::vector<double> t(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k)
        t[static_cast<std::size_t>(k)] = t_max * k / (points - 1);
    return t;
}

/// Largest entry of |rho(t) - alpha(t) alpha(t)^dagger| over the grid, with
/// rho from the density-matrix equation and alpha from the amplitude
/// equation, both started from the same pure state.
inline double factorization_discrepancy(const AmplitudeVector4& alpha0, const AtomParams& p,
                                        std::span<const double> t_grid,
                                        const ode::Tolerances& tol = default_dynamics_tolerances())
{
    const auto rho = evolve_density(alpha0.outer(), p, t_grid, tol);
    const auto alpha = evolve_amplitudes(alpha0, p, t_grid, tol);
    double worst = 0.0;
    for (std::size_t k = 0; k < rho.size(); ++k)
        worst = std::max(worst, (rho[k].rho - alpha[k].outer().rho).cwiseAbs().maxCoeff());
    return worst;
}

inline double verify_factorization(const AtomParams& p, double t_max, int n_checkpoints,
                                   const AmplitudeVector4& alpha0 = AmplitudeVector4::ground())
{
    if (!(t_max > 0.0))
        throw domain_error("verify_factorization: t_max must be positive");
    const auto grid = linear_grid(t_max, n_checkpoints);
    return factorization_discrepancy(alpha0, p, grid);
}

/// |alpha_1(t)|^2 from the weak-coupling system (alpha_4 held at 1, all
/// other amplitudes starting at 0), at every grid time.
inline std::vector<double> perturbative_p2_profile(const AtomParams& p, std::span<const double> t_grid,
                                                   const ode::Tolerances& tol = default_dynamics_tolerances())
{
    p.validate();
    detail::check_grid(t_grid);
    using Vector3c = Eigen::Matrix<Complex, 3, 1>;
    const double rate = detail::time_scale_rate(p);
    const double inv = 1.0 / (PhysicalConstants::hbar * rate);
    const double g1 = 0.5 * p.gamma1 / rate;
    const double g2 = 0.5 * p.gamma2 / rate;
    const Complex minus_i{0.0, -1.0};
    const auto rhs = [&](double tau, const Vector3c& a) -> Vector3c {
        const double t = tau / rate;
        const Complex up = std::polar(1.0, p.delta * t);
        const Complex down = std::conj(up);
        Vector3c d;
        d(0) = -g2 * a(0) + minus_i * inv * (std::conj(p.m2) * up * a(1) + p.m2 * up * a(2));
        d(1) = -g1 * a(1) + minus_i * inv * (p.m1 * down);
        d(2) = -g1 * a(2) + minus_i * inv * (std::conj(p.m1) * down);
        return d;
    };
    std::vector<double> tau = detail::scaled_times(t_grid, rate);
    const bool prepend = tau.front() > 0.0;
    if (prepend)
        tau.insert(tau.begin(), 0.0);
    const auto states = ode::integrate<Vector3c>(rhs, Vector3c::Zero(), tau, tol);
    std::vector<double> out;
    out.reserve(t_grid.size());
    for (std::size_t k = prepend ? 1 : 0; k < states.size(); ++k)
        out.push_back(std::norm(states[k](0)));
    return out;
}

inline double perturbative_p2(const AtomParams& p, double t)
{
    if (!(t >= 0.0))
        throw domain_error("perturbative_p2: time must be non-negative");
    if (t == 0.0)
        return 0.0;
    const double grid[] = {0.0, t};
    return perturbative_p2_profile(p, grid).back();
}

/// Closed-form upper-state probability as printed, with the local field
/// entering through field4 = |E|^4. Raises on the removable singularity
/// (Gamma2 - Gamma1)^2 + 4 Delta^2 -> 0.
inline double analytic_p2(const AtomParams& p, double field4, double t)
{
    const double g1 = p.gamma1;
    const double g2 = p.gamma2;
    const double dl = p.delta;
    const double degeneracy = (g2 - g1) * (g2 - g1) + 4.0 * dl * dl;
    if (!(std::abs(degeneracy) >= 1e-6 * g2 * g2) || !(g2 > 0.0))
        throw domain_error("analytic_p2: degenerate denominator ((Gamma2-Gamma1)^2 + 4 Delta^2 ~ 0); "
                           "use perturbative_p2 instead");
    const double e1 = std::exp(-0.5 * g1 * t);
    const double e2 = std::exp(-0.5 * g2 * t);
    const double first = -2.0 * dl * (1.0 - e2) + std::sin(dl * t) * e1 * g2;
    const double second = (g1 - g2) - e2 * g1 + std::cos(dl * t) * e1 * g2;
    const double hbar2 = PhysicalConstants::hbar * PhysicalConstants::hbar;
    const double num = 16.0 * p.d1 * p.d1 * p.d2 * p.d2 * field4 * (first * first + second * second);
    const double den = hbar2 * hbar2 * (4.0 * dl * dl + g1 * g1) * g2 * g2 * degeneracy;
    return num / den;
}

/// 64 d1^2 d2^2 / (hbar^4 (4 Delta^2 + Gamma1^2) Gamma2), the factor that
/// multiplies |E|^4 in the steady-state rate.
inline double rate_prefactor(const AtomParams& p)
{
    if (!(p.gamma2 > 0.0))
        throw domain_error("steady-state rate needs Gamma2 > 0");
    const double hbar2 = PhysicalConstants::hbar * PhysicalConstants::hbar;
    return 64.0 * p.d1 * p.d1 * p.d2 * p.d2
        / (hbar2 * hbar2 * (4.0 * p.delta * p.delta + p.gamma1 * p.gamma1) * p.gamma2);
}

/// Steady-state two-photon absorption rate of one atom in a field with |E|^4 = field4.
inline double local_steady_rate(const AtomParams& p, double field4)
{
    if (!(field4 >= 0.0))
        throw domain_error("local_steady_rate: field4 must be non-negative");
    return rate_prefactor(p) * field4;
}

} // namespace taper_tpa

#endif // TAPER_TPA_ATOM_DYNAMICS_HPP
