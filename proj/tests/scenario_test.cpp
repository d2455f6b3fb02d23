#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "frplan/scenario.hpp"

using namespace frplan;

namespace {

std::string write_temp(const std::string& contents) {
    static int counter = 0;
    const std::string path = ::testing::TempDir() + "scenario_" + std::to_string(counter++) + ".json";
    std::ofstream out(path);
    out << contents;
    return path;
}

} // namespace

TEST(ParseScenario, DefaultsMatchReferenceSetup) {
    const std::string path = write_temp(R"({
        "tx": {"x": 0, "y": -50},
        "target": {"area": {"cx": 100, "cy": -150, "dx": 100, "dy": 50}}
    })");
    const Scenario s = parse_scenario(path);
    EXPECT_DOUBLE_EQ(s.carrier_hz, 2.4e9);
    EXPECT_DOUBLE_EQ(s.tx_power_dbm, 30.0);
    EXPECT_DOUBLE_EQ(s.l1_wavelengths, 10.0);
    EXPECT_DOUBLE_EQ(s.l2_wavelengths, 5.0);
    // wavelength from c/f rounds to the nominal 0.125 m within 0.1%
    EXPECT_NEAR(s.wavelength(), 0.125, 0.125 * 1e-3);
    EXPECT_NEAR(s.dims().l1, 1.25, 1.25 * 1e-3);
    EXPECT_DOUBLE_EQ(s.dims().l1_norm(), 10.0);
    EXPECT_NEAR(s.link_budget().tx_power_w, 1.0, 1e-12);
    ASSERT_TRUE(s.area.has_value());
    EXPECT_FALSE(s.point.has_value());
    EXPECT_DOUBLE_EQ(s.area->dx, 100.0);
}

TEST(ParseScenario, PointTargetAndOptions) {
    const std::string path = write_temp(R"({
        "carrier_hz": 5.8e9,
        "tx_power_dbm": 20,
        "tx": {"x": 0, "y": -150},
        "reflector": {"l1_wavelengths": 20, "l2_wavelengths": 10},
        "target": {"point": {"x": 100, "y": -60}},
        "options": {"grid_step_m": 0.5, "search_step_m": 0.1, "max_reflectors": 9, "region_size_m": 80}
    })");
    const Scenario s = parse_scenario(path);
    EXPECT_DOUBLE_EQ(s.carrier_hz, 5.8e9);
    ASSERT_TRUE(s.point.has_value());
    EXPECT_DOUBLE_EQ(s.point->x, 100.0);
    EXPECT_DOUBLE_EQ(s.options.search_step_m, 0.1);
    EXPECT_EQ(s.options.max_reflectors, 9);
    EXPECT_NEAR(s.wavelength(), 299792458.0 / 5.8e9, 1e-15);
}

TEST(ParseScenario, RejectsAmbiguousTarget) {
    const std::string path = write_temp(R"({
        "tx": {"x": 0, "y": -50},
        "target": {
            "point": {"x": 100, "y": -150},
            "area": {"cx": 100, "cy": -150, "dx": 10, "dy": 10}
        }
    })");
    EXPECT_THROW(parse_scenario(path), Error);
}

TEST(ParseScenario, RejectsMissingOrInvalidFields) {
    EXPECT_THROW(parse_scenario(write_temp(R"({"target": {"point": {"x": 1, "y": -1}}})")), Error);
    EXPECT_THROW(parse_scenario(write_temp(R"({"tx": {"x": 0, "y": -50}})")), Error);
    EXPECT_THROW(parse_scenario(write_temp(R"({
        "carrier_hz": -1,
        "tx": {"x": 0, "y": -50},
        "target": {"point": {"x": 1, "y": -1}}
    })")),
                 Error);
    EXPECT_THROW(parse_scenario(write_temp(R"({
        "tx": {"x": 0, "y": -50},
        "target": {"area": {"cx": 0, "cy": -50, "dx": 0, "dy": 10}}
    })")),
                 Error);
    EXPECT_THROW(parse_scenario(write_temp("not json")), Error);
    EXPECT_THROW(parse_scenario("/nonexistent/scenario.json"), Error);
}

TEST(ParseScenario, ErrorNamesOffendingField) {
    const std::string path = write_temp(R"({
        "tx": {"x": 0, "y": -50},
        "target": {"area": {"cx": 0, "cy": -50, "dx": -5, "dy": 10}}
    })");
    try {
        parse_scenario(path);
        FAIL() << "expected a validation error";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::invalid_parameter);
        EXPECT_NE(std::string(e.what()).find("dx"), std::string::npos);
    }
}

TEST(Fnv1a64, StableContentHash) {
    EXPECT_EQ(fnv1a64(""), 14695981039346656037ull);
    EXPECT_EQ(fnv1a64("a"), 12638187200555641996ull);
    EXPECT_NE(fnv1a64("scenario-a"), fnv1a64("scenario-b"));
}
