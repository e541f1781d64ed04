#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "taper_tpa/config.hpp"
#include "taper_tpa/csv.hpp"

using namespace taper_tpa;

namespace {

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

const std::string nominal_text = slurp(std::string(TAPER_TPA_SOURCE_DIR) + "/configs/nominal.cfg");

std::string error_of(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const config_error& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST(Config, NominalParsesToSectionThreeValues)
{
    ASSERT_FALSE(nominal_text.empty());
    const auto c = parse_config(nominal_text);
    EXPECT_EQ(c.wavelength_nm, 778.1);
    EXPECT_EQ(c.diameter_nm, 350.0);
    EXPECT_EQ(c.length_mm, 5.0);
    EXPECT_EQ(c.power_w, 1e-3);
    EXPECT_EQ(c.density_per_cm3, 1e12);
    EXPECT_EQ(c.detuning, 6.54e12);
    EXPECT_EQ(c.detuning_unit, DetuningUnit::rad);
    EXPECT_EQ(c.r1_nm, 0.223);
    EXPECT_EQ(c.r2_nm, 0.0492);
    EXPECT_FALSE(c.wavelength_b_nm);
    EXPECT_FALSE(c.power_b_w);
}

TEST(Config, NominalRoundTripsModuloComments)
{
    EXPECT_EQ(serialize_config(parse_config(nominal_text)), strip_config_comments(nominal_text));
    const auto two = slurp(std::string(TAPER_TPA_SOURCE_DIR) + "/configs/two_color_50pw.cfg");
    EXPECT_EQ(serialize_config(parse_config(two)), strip_config_comments(two));
}

TEST(Config, MatchesBuiltInNominalScenario)
{
    const auto from_file = to_scenario(parse_config(nominal_text));
    const auto built_in = nominal_scenario();
    EXPECT_DOUBLE_EQ(from_file.diameter, built_in.diameter);
    EXPECT_DOUBLE_EQ(from_file.taper_length, built_in.taper_length);
    EXPECT_DOUBLE_EQ(from_file.density, built_in.density);
    EXPECT_DOUBLE_EQ(from_file.beam_a.wavelength, built_in.beam_a.wavelength);
    EXPECT_DOUBLE_EQ(from_file.atom.d1, built_in.atom.d1);
    EXPECT_DOUBLE_EQ(from_file.atom.d2, built_in.atom.d2);
    EXPECT_EQ(from_file.atom.delta, built_in.atom.delta);
    EXPECT_EQ(from_file.beam_b.wavelength, from_file.beam_a.wavelength);
    EXPECT_EQ(from_file.beam_b.power, from_file.beam_a.power);
    EXPECT_EQ(serialize_config(ScenarioConfig::nominal()), strip_config_comments(nominal_text));
}

TEST(Config, EmptyFileListsRequiredKeys)
{
    const auto msg = error_of("");
    for (const char* key : {"wavelength_nm", "diameter_nm", "length_mm", "power_w", "density_per_cm3", "gamma1_per_s",
                            "gamma2_per_s", "detuning", "detuning_unit", "r1_nm", "r2_nm"})
        EXPECT_NE(msg.find(key), std::string::npos) << key;
}

TEST(Config, RangeErrorNamesKeyAndLine)
{
    const auto msg = error_of("# header\ndiameter_nm = -5\n");
    EXPECT_NE(msg.find("diameter_nm"), std::string::npos);
    EXPECT_NE(msg.find("line 2"), std::string::npos);
}

TEST(Config, UnknownDuplicateAndMalformed)
{
    EXPECT_NE(error_of(nominal_text + "diamter_nm = 3\n").find("unknown key"), std::string::npos);
    EXPECT_NE(error_of(nominal_text + "diameter_nm = 300\n").find("more than once"), std::string::npos);
    EXPECT_NE(error_of("diameter_nm = 3x\n").find("diameter_nm"), std::string::npos);
    EXPECT_NE(error_of("diameter_nm 300\n").find("line 1"), std::string::npos);
    EXPECT_NE(error_of("detuning_unit = ghz\n").find("detuning_unit"), std::string::npos);
    EXPECT_NE(error_of("wavelength_nm = 300\n").find("wavelength_nm"), std::string::npos);
}

TEST(Config, OptionalKeysAndDetuningUnits)
{
    auto c = parse_config(nominal_text);
    c.detuning_unit = DetuningUnit::hz;
    c.detuning = 1e9;
    EXPECT_DOUBLE_EQ(c.detuning_rad_per_s(), two_pi * 1e9);
    c.wavelength_b_nm = 776.0;
    c.power_b_w = 2e-3;
    c.orientation_averaging = OrientationAveraging::isotropic;
    c.power_velocity = PowerVelocity::group;
    const auto again = parse_config(serialize_config(c));
    EXPECT_EQ(*again.wavelength_b_nm, 776.0);
    EXPECT_EQ(*again.power_b_w, 2e-3);
    EXPECT_EQ(*again.orientation_averaging, OrientationAveraging::isotropic);
    EXPECT_EQ(*again.power_velocity, PowerVelocity::group);
    const auto s = to_scenario(again);
    EXPECT_DOUBLE_EQ(s.beam_b.wavelength, 776e-9);
    EXPECT_NEAR(s.atom.delta, two_pi * 1e9, 1e-3);
}

TEST(Config, TwoColorDerivesBeamPair)
{
    auto c = parse_config(nominal_text);
    c.two_color = true;
    c.detuning = 1e9;
    const auto s = to_scenario(c);
    EXPECT_NE(s.beam_a.wavelength, s.beam_b.wavelength);
    c.wavelength_b_nm = 777.0;
    EXPECT_THROW(validate_config(c), config_error);
}

TEST(Csv, HeaderOnlyForEmptyTable)
{
    std::ostringstream os;
    write_csv(ResultTable({"a", "b"}), os);
    EXPECT_EQ(os.str(), "a,b\n");
}

TEST(Csv, RoundTripIsBitExact)
{
    ResultTable t({"x", "y", "z"});
    t.add_row({0.1, 1.0 / 3.0, -2.5e-300});
    t.add_row({6.02214076e23, std::nextafter(1.0, 2.0), std::numeric_limits<double>::quiet_NaN()});
    std::stringstream s;
    write_csv(t, s);
    const auto text = s.str();
    EXPECT_EQ(text.find(",\n"), std::string::npos);
    EXPECT_EQ(text.find('\r'), std::string::npos);
    const auto back = read_csv(s);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back.columns(), t.columns());
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 3; ++c) {
            if (std::isnan(t.rows()[r][c]))
                EXPECT_TRUE(std::isnan(back.rows()[r][c]));
            else
                EXPECT_EQ(back.rows()[r][c], t.rows()[r][c]);
        }
}

TEST(Csv, RejectsRaggedRows)
{
    ResultTable t({"a", "b"});
    EXPECT_THROW(t.add_row({1.0}), domain_error);
    EXPECT_THROW(t.column("c"), domain_error);
}

TEST(Csv, SinkFailurePropagates)
{
    std::ostringstream os;
    os.setstate(std::ios::badbit);
    EXPECT_THROW(write_csv(ResultTable({"a"}), os), std::runtime_error);
}
