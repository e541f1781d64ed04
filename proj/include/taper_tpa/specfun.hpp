#ifndef TAPER_TPA_SPECFUN_HPP
#define TAPER_TPA_SPECFUN_HPP

// Integer-order Bessel functions J0..J2 and modified Bessel functions of the
// second kind K0..K2 for real non-negative arguments.
//
// J: power series for x < 0.5, Miller backward recurrence normalized by
//    1 = J0 + 2 sum_k J_2k elsewhere.
// K: ascending series (with the logarithmic term) for x <= 2, Steed's
//    continued fraction (Temme's CF2 form) for x > 2. Exponential underflow
//    for very large x returns 0.

#include <cmath>
#include <numbers>

#include "taper_tpa/errors.hpp"

namespace taper_tpa::specfun {

struct BesselTriple {
    double order0;
    double order1;
    double order2;

    double operator[](int n) const { return n == 0 ? order0 : (n == 1 ? order1 : order2); }
};

namespace detail {

inline void check_order(int n)
{
    if (n < 0 || n > 2)
        throw domain_error("only Bessel orders 0, 1, 2 are supported");
}

inline double j_series(int n, double x)
{
    const double half = 0.5 * x;
    const double t = -half * half;
    double term = 1.0;
    for (int k = 1; k <= n; ++k)
        term *= half / k;
    double sum = term;
    for (int k = 1; k < 60; ++k) {
        term *= t / (static_cast<double>(k) * (k + n));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum))
            break;
    }
    return sum;
}

inline BesselTriple j_miller(double x)
{
    constexpr double big = 1e250;
    constexpr double small = 1e-250;
    int start = static_cast<int>(x) + 40 + static_cast<int>(10.0 * std::cbrt(x));
    start += start % 2;

    double above = 0.0; // J_{k+1}
    double current = 1.0; // J_k, arbitrary scale
    double even_sum = 0.0;
    double j1 = 0.0;
    double j2 = 0.0;
    for (int k = start; k > 0; --k) {
        const double below = 2.0 * k / x * current - above;
        above = current;
        current = below;
        if (std::abs(current) > big) {
            current *= small;
            above *= small;
            even_sum *= small;
            j1 *= small;
            j2 *= small;
        }
        const int n = k - 1;
        if (n == 1)
            j1 = current;
        else if (n == 2)
            j2 = current;
        if (n > 0 && n % 2 == 0)
            even_sum += current;
    }
    const double norm = current + 2.0 * even_sum;
    return {current / norm, j1 / norm, j2 / norm};
}

struct KPair {
    double k0;
    double k1;
};

inline KPair k_series(double x)
{
    constexpr double euler_gamma = std::numbers::egamma;
    const double t = 0.25 * x * x;
    const double log_half = std::log(0.5 * x);

    // psi(k+1) = -gamma + H_k
    double psi_k1 = -euler_gamma;
    double psi_k2 = 1.0 - euler_gamma;
    double c0 = 1.0; // t^k / (k!)^2
    double c1 = 1.0; // t^k / (k! (k+1)!)
    double i0 = 0.0;
    double i1_over = 0.0;
    double s0 = 0.0;
    double s1 = 0.0;
    for (int k = 0; k < 80; ++k) {
        i0 += c0;
        i1_over += c1;
        s0 += psi_k1 * c0;
        s1 += (psi_k1 + psi_k2) * c1;
        if (c0 < 1e-18 * i0 && k > 2)
            break;
        c0 *= t / ((k + 1.0) * (k + 1.0));
        c1 *= t / ((k + 1.0) * (k + 2.0));
        psi_k1 += 1.0 / (k + 1.0);
        psi_k2 += 1.0 / (k + 2.0);
    }
    const double i1 = 0.5 * x * i1_over;
    return {-log_half * i0 + s0, 1.0 / x + log_half * i1 - 0.25 * x * s1};
}

inline KPair k_continued_fraction(double x)
{
    constexpr double eps = 1e-17;
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    const double a1 = 0.25;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 1; i < 100000; ++i) {
        a -= 2.0 * i;
        c = -a * c / (i + 1.0);
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < eps)
            break;
    }
    h *= a1;
    const double k0 = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) / s;
    const double k1 = k0 * (x + 0.5 - h) / x;
    return {k0, k1};
}

} // namespace detail

/// J0(x), J1(x), J2(x) from one recurrence pass.
inline BesselTriple bessel_j012(double x)
{
    if (!(x >= 0.0))
        throw domain_error("bessel_j: argument must be non-negative");
    if (x == 0.0)
        return {1.0, 0.0, 0.0};
    if (x < 0.5)
        return {detail::j_series(0, x), detail::j_series(1, x), detail::j_series(2, x)};
    return detail::j_miller(x);
}

/// K0(x), K1(x), K2(x).
inline BesselTriple bessel_k012(double x)
{
    if (!(x > 0.0))
        throw domain_error("bessel_k: argument must be positive");
    const auto [k0, k1] = x <= 2.0 ? detail::k_series(x) : detail::k_continued_fraction(x);
    return {k0, k1, k0 + 2.0 * k1 / x};
}

inline double bessel_j(int n, double x)
{
    detail::check_order(n);
    return bessel_j012(x)[n];
}

inline double bessel_k(int n, double x)
{
    detail::check_order(n);
    return bessel_k012(x)[n];
}

/// J1'(x) = J0(x) - J1(x)/x, evaluated as (J0 - J2)/2 so the x -> 0 limit is 1/2.
inline double bessel_j1_prime(double x)
{
    const auto j = bessel_j012(x);
    return 0.5 * (j.order0 - j.order2);
}

/// K1'(x) = -(K0(x) + K2(x))/2.
inline double bessel_k1_prime(double x)
{
    const auto k = bessel_k012(x);
    return -0.5 * (k.order0 + k.order2);
}

} // namespace taper_tpa::specfun

#endif // TAPER_TPA_SPECFUN_HPP
