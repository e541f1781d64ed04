#ifndef TAPER_TPA_CONFIG_HPP
#define TAPER_TPA_CONFIG_HPP

// Flat `key = value` scenario files. '#' starts a comment; blank lines are
// ignored. Unknown or repeated keys are errors.

#include <array>
#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "taper_tpa/errors.hpp"
#include "taper_tpa/tpa_engine.hpp"
#include "taper_tpa/units.hpp"

namespace taper_tpa {

enum class DetuningUnit { hz, rad };

struct ScenarioConfig {
    double wavelength_nm = 0.0;
    std::optional<double> wavelength_b_nm;
    double diameter_nm = 0.0;
    double length_mm = 0.0;
    double power_w = 0.0;
    std::optional<double> power_b_w;
    double density_per_cm3 = 0.0;
    double gamma1_per_s = 0.0;
    double gamma2_per_s = 0.0;
    double detuning = 0.0;
    DetuningUnit detuning_unit = DetuningUnit::rad;
    double r1_nm = 0.0;
    double r2_nm = 0.0;
    std::optional<double> n_clad;
    std::optional<OrientationAveraging> orientation_averaging;
    std::optional<double> quadrature_rel_tol;
    std::optional<PowerVelocity> power_velocity;
    // beams re-tuned around wavelength_nm so that beam a sits `detuning` above the D2 line
    std::optional<bool> two_color;

    double detuning_rad_per_s() const
    {
        return detuning_unit == DetuningUnit::hz ? two_pi * detuning : detuning;
    }
    bool is_two_color() const { return two_color.value_or(false); }

    /// Section III parameter set.
    static ScenarioConfig nominal()
    {
        ScenarioConfig c;
        c.wavelength_nm = 778.1;
        c.diameter_nm = 350;
        c.length_mm = 5;
        c.power_w = 1e-3;
        c.density_per_cm3 = 1e12;
        c.gamma1_per_s = 1e9;
        c.gamma2_per_s = 1e9;
        c.detuning = 6.54e12;
        c.detuning_unit = DetuningUnit::rad;
        c.r1_nm = 0.223;
        c.r2_nm = 0.0492;
        return c;
    }
};

namespace detail {

inline constexpr std::array<std::string_view, 11> required_keys{
    "wavelength_nm", "diameter_nm",  "length_mm",     "power_w", "density_per_cm3", "gamma1_per_s",
    "gamma2_per_s",  "detuning",     "detuning_unit", "r1_nm",   "r2_nm"};

inline std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] inline void fail(int line, std::string_view key, const std::string& what)
{
    std::ostringstream os;
    os << "config line " << line;
    if (!key.empty())
        os << ", key '" << key << "'";
    os << ": " << what;
    throw config_error(os.str());
}

inline double parse_number(std::string_view text, int line, std::string_view key)
{
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v))
        fail(line, key, "cannot parse '" + std::string(text) + "' as a finite number");
    return v;
}

inline std::string format_number(double v)
{
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

/// Range rule for one numeric key; nullptr when the value is acceptable.
inline const char* range_violation(std::string_view key, double v)
{
    if (key == "wavelength_nm" || key == "wavelength_b_nm")
        return v >= 400.0 && v <= 1600.0 ? nullptr : "must lie in [400, 1600] nm";
    if (key == "diameter_nm" || key == "length_mm" || key == "gamma1_per_s" || key == "gamma2_per_s"
        || key == "r1_nm" || key == "r2_nm")
        return v > 0.0 ? nullptr : "must be positive";
    if (key == "power_w" || key == "power_b_w" || key == "density_per_cm3")
        return v >= 0.0 ? nullptr : "must be non-negative";
    if (key == "n_clad")
        return v >= 1.0 && v < 1.44 ? nullptr : "must lie in [1, 1.44)";
    if (key == "quadrature_rel_tol")
        return v > 0.0 && v <= 1e-2 ? nullptr : "must lie in (0, 1e-2]";
    return nullptr;
}

} // namespace detail

/// Range checks for a programmatically built config.
inline void validate_config(const ScenarioConfig& c)
{
    const auto need = [](std::string_view key, double v) {
        if (const char* why = detail::range_violation(key, v))
            throw config_error("config key '" + std::string(key) + "' " + why);
    };
    need("wavelength_nm", c.wavelength_nm);
    if (c.wavelength_b_nm)
        need("wavelength_b_nm", *c.wavelength_b_nm);
    need("diameter_nm", c.diameter_nm);
    need("length_mm", c.length_mm);
    need("power_w", c.power_w);
    if (c.power_b_w)
        need("power_b_w", *c.power_b_w);
    need("density_per_cm3", c.density_per_cm3);
    need("gamma1_per_s", c.gamma1_per_s);
    need("gamma2_per_s", c.gamma2_per_s);
    need("r1_nm", c.r1_nm);
    need("r2_nm", c.r2_nm);
    if (c.n_clad)
        need("n_clad", *c.n_clad);
    if (c.quadrature_rel_tol)
        need("quadrature_rel_tol", *c.quadrature_rel_tol);
    if (c.is_two_color() && c.wavelength_b_nm)
        throw config_error("config key 'wavelength_b_nm' is derived from the detuning in two-color mode");
}

inline ScenarioConfig parse_config(std::string_view text)
{
    ScenarioConfig c;
    std::vector<std::string> seen;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos)
            eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty())
            continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            detail::fail(line_no, {}, "expected 'key = value', got '" + std::string(line) + "'");
        const std::string key(detail::trim(line.substr(0, eq)));
        const std::string_view value = detail::trim(line.substr(eq + 1));
        if (key.empty())
            detail::fail(line_no, {}, "missing key before '='");
        if (value.empty())
            detail::fail(line_no, key, "missing value");
        for (const auto& k : seen)
            if (k == key)
                detail::fail(line_no, key, "given more than once");
        seen.push_back(key);

        const auto num = [&] {
            const double v = detail::parse_number(value, line_no, key);
            if (const char* why = detail::range_violation(key, v))
                detail::fail(line_no, key, why);
            return v;
        };
        if (key == "wavelength_nm")
            c.wavelength_nm = num();
        else if (key == "wavelength_b_nm")
            c.wavelength_b_nm = num();
        else if (key == "diameter_nm")
            c.diameter_nm = num();
        else if (key == "length_mm")
            c.length_mm = num();
        else if (key == "power_w")
            c.power_w = num();
        else if (key == "power_b_w")
            c.power_b_w = num();
        else if (key == "density_per_cm3")
            c.density_per_cm3 = num();
        else if (key == "gamma1_per_s")
            c.gamma1_per_s = num();
        else if (key == "gamma2_per_s")
            c.gamma2_per_s = num();
        else if (key == "detuning")
            c.detuning = num();
        else if (key == "r1_nm")
            c.r1_nm = num();
        else if (key == "r2_nm")
            c.r2_nm = num();
        else if (key == "n_clad")
            c.n_clad = num();
        else if (key == "quadrature_rel_tol")
            c.quadrature_rel_tol = num();
        else if (key == "detuning_unit") {
            if (value == "hz")
                c.detuning_unit = DetuningUnit::hz;
            else if (value == "rad")
                c.detuning_unit = DetuningUnit::rad;
            else
                detail::fail(line_no, key, "expected 'hz' or 'rad'");
        } else if (key == "orientation_averaging") {
            if (value == "none")
                c.orientation_averaging = OrientationAveraging::none;
            else if (value == "isotropic")
                c.orientation_averaging = OrientationAveraging::isotropic;
            else
                detail::fail(line_no, key, "expected 'none' or 'isotropic'");
        } else if (key == "power_velocity") {
            if (value == "phase")
                c.power_velocity = PowerVelocity::phase;
            else if (value == "group")
                c.power_velocity = PowerVelocity::group;
            else
                detail::fail(line_no, key, "expected 'phase' or 'group'");
        } else if (key == "two_color") {
            if (value == "true")
                c.two_color = true;
            else if (value == "false")
                c.two_color = false;
            else
                detail::fail(line_no, key, "expected 'true' or 'false'");
        } else {
            detail::fail(line_no, key, "unknown key");
        }
    }

    std::string missing;
    for (auto k : detail::required_keys) {
        bool found = false;
        for (const auto& s : seen)
            found = found || s == k;
        if (!found)
            missing += (missing.empty() ? "" : ", ") + std::string(k);
    }
    if (!missing.empty())
        throw config_error("config is missing required keys: " + missing);

    validate_config(c);
    return c;
}

/// Canonical form: every present key once, in the documented order, shortest
/// round-trip number formatting. Optional keys that were never set are omitted.
inline std::string serialize_config(const ScenarioConfig& c)
{
    std::ostringstream os;
    const auto put = [&](std::string_view key, const std::string& value) { os << key << " = " << value << '\n'; };
    const auto num = [&](std::string_view key, double v) { put(key, detail::format_number(v)); };
    num("wavelength_nm", c.wavelength_nm);
    if (c.wavelength_b_nm)
        num("wavelength_b_nm", *c.wavelength_b_nm);
    num("diameter_nm", c.diameter_nm);
    num("length_mm", c.length_mm);
    num("power_w", c.power_w);
    if (c.power_b_w)
        num("power_b_w", *c.power_b_w);
    num("density_per_cm3", c.density_per_cm3);
    num("gamma1_per_s", c.gamma1_per_s);
    num("gamma2_per_s", c.gamma2_per_s);
    num("detuning", c.detuning);
    put("detuning_unit", c.detuning_unit == DetuningUnit::hz ? "hz" : "rad");
    num("r1_nm", c.r1_nm);
    num("r2_nm", c.r2_nm);
    if (c.n_clad)
        num("n_clad", *c.n_clad);
    if (c.orientation_averaging)
        put("orientation_averaging",
            *c.orientation_averaging == OrientationAveraging::isotropic ? "isotropic" : "none");
    if (c.quadrature_rel_tol)
        num("quadrature_rel_tol", *c.quadrature_rel_tol);
    if (c.power_velocity)
        put("power_velocity", *c.power_velocity == PowerVelocity::group ? "group" : "phase");
    if (c.two_color)
        put("two_color", *c.two_color ? "true" : "false");
    return os.str();
}

/// Drops comments, blank lines and padding so two files can be compared
/// on content alone.
inline std::string strip_config_comments(std::string_view text)
{
    std::string out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos)
            eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = detail::trim(line);
        if (!line.empty()) {
            out += line;
            out += '\n';
        }
    }
    return out;
}

inline TpaScenario to_scenario(const ScenarioConfig& c)
{
    validate_config(c);
    TpaScenario s;
    // divide by exact powers of ten so 350 nm becomes the double nearest 350e-9
    s.diameter = c.diameter_nm / 1e9;
    s.taper_length = c.length_mm / 1e3;
    s.density = c.density_per_cm3 * 1e6;
    s.beam_a = {c.wavelength_nm / 1e9, c.power_w, Direction::forward};
    s.beam_b = {c.wavelength_b_nm.value_or(c.wavelength_nm) / 1e9, c.power_b_w.value_or(c.power_w),
                Direction::backward};
    s.atom.d1 = dipole_from_radius(c.r1_nm / 1e9);
    s.atom.d2 = dipole_from_radius(c.r2_nm / 1e9);
    s.atom.gamma1 = c.gamma1_per_s;
    s.atom.gamma2 = c.gamma2_per_s;
    s.atom.delta = c.detuning_rad_per_s();
    s.orientation = c.orientation_averaging.value_or(OrientationAveraging::none);
    s.power_velocity = c.power_velocity.value_or(PowerVelocity::phase);
    s.n_clad = c.n_clad.value_or(1.0);
    s.quadrature.convergence_tol = c.quadrature_rel_tol.value_or(1e-8);
    if (c.is_two_color())
        s = with_two_color(s, s.atom.delta, c.wavelength_nm / 1e9);
    return s;
}

} // namespace taper_tpa

#endif // TAPER_TPA_CONFIG_HPP
