// taper_tpa: mode solutions, field profiles, two-photon absorption rates,
// parameter sweeps and atom dynamics for a nanofiber taper in Rb vapor.
//
// Exit status: 0 success, 1 physics or numerical failure, 2 usage or config error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "taper_tpa/taper_tpa.hpp"

using namespace taper_tpa;

namespace {

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string config_path;
    std::optional<double> wavelength_nm;
    std::optional<double> diameter_nm;
    std::string output;
    unsigned threads = 0;
    bool two_color = false;

    double dmin_nm = 200, dmax_nm = 600, step_nm = 5;

    std::optional<double> delta_min, delta_max;
    int points = 61;
    std::string delta_unit = "rad";
    std::string spacing = "log";

    std::optional<double> tmax_s;
    int samples = 201;

    std::optional<double> r_max_nm;
    int radial_points = 200;
    int azimuthal_points = 37;
};

ScenarioConfig load_config(const Options& o)
{
    ScenarioConfig cfg = ScenarioConfig::nominal();
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in)
            throw config_error("cannot open config file " + o.config_path);
        std::stringstream text;
        text << in.rdbuf();
        cfg = parse_config(text.str());
    }
    if (o.wavelength_nm)
        cfg.wavelength_nm = *o.wavelength_nm;
    if (o.diameter_nm)
        cfg.diameter_nm = *o.diameter_nm;
    if (o.two_color)
        cfg.two_color = true;
    validate_config(cfg);
    return cfg;
}

// Runs `write` against the --output file, or stdout when none is given.
template <class F>
void with_sink(const Options& o, F&& write)
{
    if (o.output.empty()) {
        write(std::cout);
        return;
    }
    std::ofstream out(o.output, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open output file " + o.output);
    write(out);
}

// Extra lines go to stderr when the CSV itself is on stdout.
std::ostream& report_stream(const Options& o)
{
    return o.output.empty() ? std::cerr : std::cout;
}

void print_value(const char* name, double v)
{
    std::printf("%s %.12g\n", name, v);
}

int run_mode(const Options& o)
{
    const auto cfg = load_config(o);
    const auto g = WaveguideGeometry::silica(cfg.diameter_nm / 1e9, cfg.wavelength_nm / 1e9, cfg.n_clad.value_or(1.0));
    const auto m = solve_he11(g);
    print_value("beta_per_m", m.beta);
    print_value("n_eff", m.n_eff);
    print_value("U", m.U);
    print_value("W", m.W);
    print_value("V", m.V);
    print_value("v_group_m_per_s", m.v_group);
    print_value("v_phase_m_per_s", m.phase_velocity());
    print_value("evanescent_fraction", evanescent_fraction(m));
    std::printf("single_mode %d\n", m.single_mode ? 1 : 0);
    return 0;
}

int run_profile(const Options& o)
{
    if (o.radial_points < 2 || o.azimuthal_points < 1)
        throw usage_error("profile needs --radial-points >= 2 and --azimuthal-points >= 1");
    const auto s = to_scenario(load_config(o));
    const auto g = WaveguideGeometry::silica(s.diameter, s.beam_a.wavelength, s.n_clad);
    const auto nm = normalize(solve_he11(g), s.quantization_length, s.quadrature);
    const double amp = std::sqrt(classical_amplitude_sq(nm, s.beam_a.power, s.power_velocity));
    const double r_max = o.r_max_nm ? *o.r_max_nm / 1e9 : 3.0 * nm.mode.a;
    if (!(r_max > 0.0))
        throw usage_error("--r-max-nm must be positive");

    ResultTable table({"r_nm", "phi_rad", "re_e_r", "im_e_r", "re_e_phi", "im_e_phi", "re_e_z", "im_e_z",
                       "intensity"});
    for (int i = 0; i < o.radial_points; ++i) {
        const double r = r_max * i / (o.radial_points - 1);
        for (int j = 0; j < o.azimuthal_points; ++j) {
            const double phi = o.azimuthal_points == 1 ? 0.0 : two_pi * j / (o.azimuthal_points - 1);
            const auto e = field_at(nm.mode, r, phi);
            const auto er = amp * e.e_r, ep = amp * e.e_phi, ez = amp * e.e_z;
            table.add_row({r * 1e9, phi, er.real(), er.imag(), ep.real(), ep.imag(), ez.real(), ez.imag(),
                           amp * amp * e.magnitude_sq()});
        }
    }
    with_sink(o, [&](std::ostream& os) { write_csv(table, os); });
    return 0;
}

int run_rate(const Options& o)
{
    const auto s = to_scenario(load_config(o));
    const auto r = total_rate(s);
    print_value("R2_per_s", r.r2_total);
    print_value("absorption_fraction", r.absorption_fraction);
    print_value("field4_integral_V4_per_m2", r.field4_integral);
    print_value("wavelength_a_nm", s.beam_a.wavelength * 1e9);
    print_value("wavelength_b_nm", s.beam_b.wavelength * 1e9);
    print_value("n_eff_a", r.mode_a.n_eff);
    print_value("evanescent_fraction_a", r.mode_a.evanescent_fraction);
    if (r.saturation_warning)
        std::fprintf(stderr, "warning: absorption fraction above %.2g; weak-excitation assumption is strained\n",
                     saturation_threshold);
    return 0;
}

int run_sweep_diameter(const Options& o)
{
    if (!(o.dmin_nm > 0.0 && o.dmin_nm < o.dmax_nm))
        throw usage_error("--dmin-nm must be positive and below --dmax-nm");
    if (!(o.step_nm > 0.0))
        throw usage_error("--step-nm must be positive");
    const auto s = to_scenario(load_config(o));
    const auto sweep = sweep_diameter(s, o.dmin_nm / 1e9, o.dmax_nm / 1e9, o.step_nm / 1e9, resolve_threads(o.threads));
    with_sink(o, [&](std::ostream& os) { write_csv(sweep.table, os); });
    auto& rep = report_stream(o);
    rep.precision(10);
    rep << "argmax_diameter_nm " << sweep.argmax_diameter * 1e9 << '\n'
        << "max_R2_per_s " << sweep.max_rate << '\n'
        << "interior_maximum " << (sweep.interior_maximum ? 1 : 0) << '\n';
    return 0;
}

int run_sweep_detuning(const Options& o)
{
    if (o.delta_unit != "hz" && o.delta_unit != "rad")
        throw usage_error("--delta-unit must be hz or rad");
    if (o.spacing != "linear" && o.spacing != "log")
        throw usage_error("--spacing must be linear or log");
    const double unit = o.delta_unit == "hz" ? two_pi : 1.0;
    const double lo = o.delta_min.value_or(1e8) * unit;
    const double hi = o.delta_max.value_or(1e13) * unit;
    if (!(lo > 0.0 && lo < hi))
        throw usage_error("--delta-min must be positive and below --delta-max");
    if (o.points < 2)
        throw usage_error("--points must be at least 2");
    const auto cfg = load_config(o);
    const auto s = to_scenario(cfg);
    const auto table = sweep_detuning(s, lo, hi, o.points, o.spacing == "log" ? Spacing::log : Spacing::linear,
                                      cfg.is_two_color(), cfg.wavelength_nm / 1e9, resolve_threads(o.threads));
    with_sink(o, [&](std::ostream& os) { write_csv(table, os); });
    return 0;
}

int run_dynamics(const Options& o)
{
    if (o.samples < 2)
        throw usage_error("--samples must be at least 2");
    const auto s = to_scenario(load_config(o));
    const AtomParams p = surface_atom_params(s);
    const double t_max = o.tmax_s.value_or(10.0 / std::min(p.gamma1, p.gamma2));
    if (!(t_max > 0.0))
        throw usage_error("--tmax-s must be positive");
    const auto grid = linear_grid(t_max, o.samples);
    const auto alpha0 = AmplitudeVector4::ground();
    const auto rho = evolve_density(alpha0.outer(), p, grid);
    const auto alpha = evolve_amplitudes(alpha0, p, grid);
    const auto pert = perturbative_p2_profile(p, grid);
    const double field4 = std::norm(p.m1) * std::norm(p.m2) / (p.d1 * p.d1 * p.d2 * p.d2);

    ResultTable table({"t_s", "rho11", "rho22", "rho33", "rho44", "trace", "p2_analytic", "p2_perturbative",
                       "factorization_error"});
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto& r = rho[k];
        const double fact = (r.rho - alpha[k].outer().rho).cwiseAbs().maxCoeff();
        table.add_row({grid[k], r.population(0), r.population(1), r.population(2), r.population(3), r.trace(),
                       analytic_p2(p, field4, grid[k]), pert[k], fact});
    }
    with_sink(o, [&](std::ostream& os) { write_csv(table, os); });
    return 0;
}

int run_verify(const Options& o)
{
    const auto s = to_scenario(load_config(o));
    int failed = 0;
    for (const auto& c : run_invariant_suite(s)) {
        std::printf("%s  %s: %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
        failed += c.passed ? 0 : 1;
    }
    std::printf("%d invariant(s) failed\n", failed);
    return failed ? 1 : 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Two-photon absorption in the evanescent field of a nanofiber taper"};
    app.require_subcommand(1);
    Options o;

    const auto scenario_flags = [&](CLI::App* sub) {
        sub->add_option("--config", o.config_path, "Scenario file (key = value)")->check(CLI::ExistingFile);
        sub->add_option("--wavelength-nm", o.wavelength_nm, "Override the wavelength");
        sub->add_option("--diameter-nm", o.diameter_nm, "Override the taper diameter");
        sub->add_flag("--two-color", o.two_color, "Re-tune the beam pair around the configured wavelength");
    };
    const auto output_flag = [&](CLI::App* sub) {
        sub->add_option("--output", o.output, "CSV destination (default stdout)");
    };
    const auto thread_flag = [&](CLI::App* sub) {
        sub->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
    };

    auto* mode = app.add_subcommand("mode", "Solve the HE11 mode");
    scenario_flags(mode);

    auto* profile = app.add_subcommand("profile", "Write the field profile of beam a");
    scenario_flags(profile);
    output_flag(profile);
    profile->add_option("--r-max-nm", o.r_max_nm, "Outer radius (default 3a)");
    profile->add_option("--radial-points", o.radial_points);
    profile->add_option("--azimuthal-points", o.azimuthal_points);

    auto* rate = app.add_subcommand("rate", "Total two-photon absorption rate");
    scenario_flags(rate);

    auto* sweep_d = app.add_subcommand("sweep-diameter", "Rate versus taper diameter");
    scenario_flags(sweep_d);
    output_flag(sweep_d);
    thread_flag(sweep_d);
    sweep_d->add_option("--dmin-nm", o.dmin_nm);
    sweep_d->add_option("--dmax-nm", o.dmax_nm);
    sweep_d->add_option("--step-nm", o.step_nm);

    auto* sweep_t = app.add_subcommand("sweep-detuning", "Rate versus intermediate-state detuning");
    scenario_flags(sweep_t);
    output_flag(sweep_t);
    thread_flag(sweep_t);
    sweep_t->add_option("--delta-min", o.delta_min);
    sweep_t->add_option("--delta-max", o.delta_max);
    sweep_t->add_option("--points", o.points);
    sweep_t->add_option("--delta-unit", o.delta_unit, "hz multiplies the range by 2 pi");
    sweep_t->add_option("--spacing", o.spacing, "linear or log");

    auto* dynamics = app.add_subcommand("dynamics", "Atom dynamics at the fiber surface");
    scenario_flags(dynamics);
    output_flag(dynamics);
    dynamics->add_option("--tmax-s", o.tmax_s);
    dynamics->add_option("--samples", o.samples);

    auto* verify = app.add_subcommand("verify", "Run the invariant suite");
    scenario_flags(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*mode)
            return run_mode(o);
        if (*profile)
            return run_profile(o);
        if (*rate)
            return run_rate(o);
        if (*sweep_d)
            return run_sweep_diameter(o);
        if (*sweep_t)
            return run_sweep_detuning(o);
        if (*dynamics)
            return run_dynamics(o);
        if (*verify)
            return run_verify(o);
    } catch (const usage_error& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
