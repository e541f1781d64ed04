#ifndef TAPER_TPA_QUADRATURE_HPP
#define TAPER_TPA_QUADRATURE_HPP

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "taper_tpa/errors.hpp"

namespace taper_tpa::quadrature {

/// Gauss-Legendre rule on [-1, 1], nodes by Newton iteration on P_n.
class GaussLegendre {
public:
    explicit GaussLegendre(int n)
        : nodes_(static_cast<std::size_t>(n))
        , weights_(static_cast<std::size_t>(n))
    {
        if (n < 1)
            throw domain_error("GaussLegendre: order must be positive");
        if (n == 1) {
            nodes_[0] = 0.0;
            weights_[0] = 2.0;
            return;
        }
        const int half = (n + 1) / 2;
        for (int i = 0; i < half; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0;
                double p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16)
                    break;
            }
            const double w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes_[static_cast<std::size_t>(i)] = -x;
            weights_[static_cast<std::size_t>(i)] = w;
            nodes_[static_cast<std::size_t>(n - 1 - i)] = x;
            weights_[static_cast<std::size_t>(n - 1 - i)] = w;
        }
    }

    int order() const { return static_cast<int>(nodes_.size()); }

    template <class F>
    double integrate(F&& f, double lo, double hi) const
    {
        const double mid = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        double sum = 0.0;
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            sum += weights_[i] * f(mid + half * nodes_[i]);
        return sum * half;
    }

    /// Composite rule on `panels` equal panels.
    template <class F>
    double integrate_composite(F&& f, double lo, double hi, int panels) const
    {
        const double width = (hi - lo) / panels;
        double sum = 0.0;
        for (int p = 0; p < panels; ++p)
            sum += integrate(f, lo + p * width, p + 1 == panels ? hi : lo + (p + 1) * width);
        return sum;
    }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/// Trapezoid rule over one period [0, 2 pi); spectrally accurate for smooth
/// periodic integrands.
template <class F>
double periodic_trapezoid(F&& f, int nodes)
{
    if (nodes < 1)
        throw domain_error("periodic_trapezoid: need at least one node");
    const double step = 2.0 * std::numbers::pi / nodes;
    double sum = 0.0;
    for (int j = 0; j < nodes; ++j)
        sum += f(j * step);
    return sum * step;
}

struct TailResult {
    double value = 0.0;
    double upper = 0.0; // truncation radius
    int panels = 0;
};

/// Integrates a decaying integrand over [lower, inf) with Gauss-Legendre
/// panels. Panels start at `first_width`, grow geometrically up to
/// `max_width`, and the sweep stops once a panel contributes less than
/// `truncation_tol` of the running total.
template <class F>
TailResult integrate_tail(F&& f, double lower, double first_width, double max_width,
                          const GaussLegendre& rule, double truncation_tol, int max_panels = 100000)
{
    TailResult res;
    double lo = lower;
    double width = std::min(first_width, max_width);
    for (int p = 0; p < max_panels; ++p) {
        const double hi = lo + width;
        const double panel = rule.integrate(f, lo, hi);
        res.value += panel;
        res.panels = p + 1;
        lo = hi;
        if (std::abs(panel) <= truncation_tol * std::abs(res.value)) {
            res.upper = lo;
            return res;
        }
        width = std::min(width * 1.5, max_width);
    }
    std::ostringstream msg;
    msg << "integrate_tail: no convergence after " << max_panels << " panels (reached r = " << lo
        << ", running value " << res.value << ")";
    throw numeric_error(msg.str());
}

} // namespace taper_tpa::quadrature

#endif // TAPER_TPA_QUADRATURE_HPP
