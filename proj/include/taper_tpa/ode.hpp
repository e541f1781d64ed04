#ifndef TAPER_TPA_ODE_HPP
#define TAPER_TPA_ODE_HPP

// Adaptive explicit Runge-Kutta integrator (Dormand-Prince 8(5,3), the
// DOP853 tableau of Hairer & Wanner) over Eigen dense states, real or
// complex. Steps are clipped to land exactly on every requested output time.

#include <algorithm>
#include <cmath>
#include <span>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "taper_tpa/errors.hpp"

namespace taper_tpa::ode {

struct Tolerances {
    double rtol = 1e-10;
    double atol = 1e-14;
    long max_steps = 50'000'000;
};

struct Stats {
    long accepted = 0;
    long rejected = 0;
};

namespace tableau {
// clang-format off
inline constexpr double c2 = 0.526001519587677318785587544488E-01, c3 = 0.789002279381515978178381316732E-01,
    c4 = 0.118350341907227396726757197510E+00, c5 = 0.281649658092772603273242802490E+00,
    c6 = 0.333333333333333333333333333333E+00, c7 = 0.25E+00, c8 = 0.307692307692307692307692307692E+00,
    c9 = 0.651282051282051282051282051282E+00, c10 = 0.6E+00, c11 = 0.857142857142857142857142857142E+00;

inline constexpr double b1 = 5.42937341165687622380535766363E-2, b6 = 4.45031289275240888144113950566E0,
    b7 = 1.89151789931450038304281599044E0, b8 = -5.8012039600105847814672114227E0,
    b9 = 3.1116436695781989440891606237E-1, b10 = -1.52160949662516078556178806805E-1,
    b11 = 2.01365400804030348374776537501E-1, b12 = 4.47106157277725905176885569043E-2;

inline constexpr double a21 = 5.26001519587677318785587544488E-2,
    a31 = 1.97250569845378994544595329183E-2, a32 = 5.91751709536136983633785987549E-2,
    a41 = 2.95875854768068491816892993775E-2, a43 = 8.87627564304205475450678981324E-2,
    a51 = 2.41365134159266685502369798665E-1, a53 = -8.84549479328286085344864962717E-1,
    a54 = 9.24834003261792003115737966543E-1,
    a61 = 3.7037037037037037037037037037E-2, a64 = 1.70828608729473871279604482173E-1,
    a65 = 1.25467687566822425016691814123E-1,
    a71 = 3.7109375E-2, a74 = 1.70252211019544039314978060272E-1, a75 = 6.02165389804559606850219397283E-2,
    a76 = -1.7578125E-2,
    a81 = 3.70920001185047927108779319836E-2, a84 = 1.70383925712239993810214054705E-1,
    a85 = 1.07262030446373284651809199168E-1, a86 = -1.53194377486244017527936158236E-2,
    a87 = 8.27378916381402288758473766002E-3,
    a91 = 6.24110958716075717114429577812E-1, a94 = -3.36089262944694129406857109825E0,
    a95 = -8.68219346841726006818189891453E-1, a96 = 2.75920996994467083049415600797E1,
    a97 = 2.01540675504778934086186788979E1, a98 = -4.34898841810699588477366255144E1,
    a101 = 4.77662536438264365890433908527E-1, a104 = -2.48811461997166764192642586468E0,
    a105 = -5.90290826836842996371446475743E-1, a106 = 2.12300514481811942347288949897E1,
    a107 = 1.52792336328824235832596922938E1, a108 = -3.32882109689848629194453265587E1,
    a109 = -2.03312017085086261358222928593E-2,
    a111 = -9.3714243008598732571704021658E-1, a114 = 5.18637242884406370830023853209E0,
    a115 = 1.09143734899672957818500254654E0, a116 = -8.14978701074692612513997267357E0,
    a117 = -1.85200656599969598641566180701E1, a118 = 2.27394870993505042818970056734E1,
    a119 = 2.49360555267965238987089396762E0, a1110 = -3.0467644718982195003823669022E0,
    a121 = 2.27331014751653820792359768449E0, a124 = -1.05344954667372501984066689879E1,
    a125 = -2.00087205822486249909675718444E0, a126 = -1.79589318631187989172765950534E1,
    a127 = 2.79488845294199600508499808837E1, a128 = -2.85899827713502369474065508674E0,
    a129 = -8.87285693353062954433549289258E0, a1210 = 1.23605671757943030647266201528E1,
    a1211 = 6.43392746015763530355970484046E-1;

inline constexpr double bhh1 = 0.244094488188976377952755905512E+00, bhh2 = 0.733846688281611857341361741547E+00,
    bhh3 = 0.220588235294117647058823529412E-01;

inline constexpr double er1 = 0.1312004499419488073250102996E-01, er6 = -0.1225156446376204440720569753E+01,
    er7 = -0.4957589496572501915214079952E+00, er8 = 0.1664377182454986536961530415E+01,
    er9 = -0.3503288487499736816886487290E+00, er10 = 0.3341791187130174790297318841E+00,
    er11 = 0.8192320648511571246570742613E-01, er12 = -0.2235530786388629525884427845E-01;
// clang-format on
} // namespace tableau

/// Integrates y' = rhs(t, y) from t_out.front() (where y = y0) and returns the
/// state at every entry of t_out. t_out must be non-decreasing.
template <class State, class Rhs>
std::vector<State> integrate(Rhs&& rhs, const State& y0, std::span<const double> t_out,
                             const Tolerances& tol = {}, Stats* stats = nullptr)
{
    using namespace tableau;

    std::vector<State> out;
    out.reserve(t_out.size());
    if (t_out.empty())
        return out;

    double t = t_out.front();
    State y = y0;
    out.push_back(y);

    const double span = t_out.back() - t;
    State k1 = rhs(t, y);
    double h = span * 1e-4;
    {
        const double d0 = y.norm();
        const double d1 = k1.norm();
        if (d0 > 1e-300 && d1 > 1e-300)
            h = std::min(h, 1e-2 * d0 / d1);
    }
    const double n = static_cast<double>(y0.size());
    bool rejected_last = false;
    Stats local;

    for (std::size_t i = 1; i < t_out.size(); ++i) {
        const double target = t_out[i];
        if (target < t)
            throw domain_error("ode::integrate: output times must be non-decreasing");
        while (t < target) {
            if (local.accepted + local.rejected > tol.max_steps) {
                std::ostringstream msg;
                msg << "ode::integrate: step budget exhausted at t = " << t;
                throw numeric_error(msg.str());
            }
            double step = h;
            bool clipped = false;
            if (t + 1.01 * step >= target) {
                step = target - t;
                clipped = true;
            }
            if (step <= std::abs(t) * 1e-15 + 1e-300) {
                std::ostringstream msg;
                msg << "ode::integrate: step size collapse at t = " << t;
                throw numeric_error(msg.str());
            }

            const State k2 = rhs(t + c2 * step, (y + step * (a21 * k1)).eval());
            const State k3 = rhs(t + c3 * step, (y + step * (a31 * k1 + a32 * k2)).eval());
            const State k4 = rhs(t + c4 * step, (y + step * (a41 * k1 + a43 * k3)).eval());
            const State k5 = rhs(t + c5 * step, (y + step * (a51 * k1 + a53 * k3 + a54 * k4)).eval());
            const State k6 = rhs(t + c6 * step, (y + step * (a61 * k1 + a64 * k4 + a65 * k5)).eval());
            const State k7 = rhs(t + c7 * step, (y + step * (a71 * k1 + a74 * k4 + a75 * k5 + a76 * k6)).eval());
            const State k8 = rhs(t + c8 * step,
                                 (y + step * (a81 * k1 + a84 * k4 + a85 * k5 + a86 * k6 + a87 * k7)).eval());
            const State k9 = rhs(
                t + c9 * step,
                (y + step * (a91 * k1 + a94 * k4 + a95 * k5 + a96 * k6 + a97 * k7 + a98 * k8)).eval());
            const State k10 = rhs(t + c10 * step,
                                  (y + step * (a101 * k1 + a104 * k4 + a105 * k5 + a106 * k6 + a107 * k7
                                               + a108 * k8 + a109 * k9))
                                      .eval());
            const State k11 = rhs(t + c11 * step,
                                  (y + step * (a111 * k1 + a114 * k4 + a115 * k5 + a116 * k6 + a117 * k7
                                               + a118 * k8 + a119 * k9 + a1110 * k10))
                                      .eval());
            const double t_new = clipped ? target : t + step;
            const State k12 = rhs(t_new, (y + step * (a121 * k1 + a124 * k4 + a125 * k5 + a126 * k6 + a127 * k7
                                                      + a128 * k8 + a129 * k9 + a1210 * k10 + a1211 * k11))
                                             .eval());
            const State incr
                = (b1 * k1 + b6 * k6 + b7 * k7 + b8 * k8 + b9 * k9 + b10 * k10 + b11 * k11 + b12 * k12).eval();
            const State y_new = (y + step * incr).eval();

            // combined 5th/3rd-order error estimate
            const auto scale = (tol.atol + tol.rtol * y.cwiseAbs().cwiseMax(y_new.cwiseAbs()).array()).eval();
            const State e5 = (er1 * k1 + er6 * k6 + er7 * k7 + er8 * k8 + er9 * k9 + er10 * k10 + er11 * k11
                              + er12 * k12)
                                 .eval();
            const State e3 = (incr - bhh1 * k1 - bhh2 * k9 - bhh3 * k12).eval();
            const double err5 = (e5.cwiseAbs().array() / scale).square().sum();
            const double err3 = (e3.cwiseAbs().array() / scale).square().sum();
            const double deno = err5 + 0.01 * err3;
            const double err = std::abs(step) * err5 * std::sqrt(1.0 / (deno <= 0.0 ? n : deno * n));

            const double grow = std::clamp(std::pow(err, 0.125) / 0.9, 1.0 / 6.0, 3.0);
            if (err <= 1.0) {
                ++local.accepted;
                t = t_new;
                y = y_new;
                k1 = rhs(t, y);
                double next = step / grow;
                if (rejected_last)
                    next = std::min(next, step);
                // a clipped step says nothing about the natural step size
                if (!clipped || next < h)
                    h = next;
                rejected_last = false;
            } else {
                ++local.rejected;
                h = step / std::min(3.0, std::pow(err, 0.125) / 0.9);
                rejected_last = true;
            }
        }
        out.push_back(y);
    }
    if (stats)
        *stats = local;
    return out;
}

} // namespace taper_tpa::ode

#endif // TAPER_TPA_ODE_HPP
