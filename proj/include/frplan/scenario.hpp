#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "frplan/coverage.hpp"
#include "frplan/geometry.hpp"
#include "frplan/link_budget.hpp"

namespace frplan {

inline constexpr double kSpeedOfLight = 299'792'458.0; // [m/s]

/// Planner knobs carried by the scenario file; all overridable from the
/// command line.
struct ScenarioOptions {
    double grid_step_m = 1.0;    // field-evaluation grid
    double search_step_m = 0.05; // 1D placement scans
    int max_reflectors = 64;
    double region_size_m = 160.0; // movable-region sweeps
};

/// Parsed and validated scenario. Exactly one of `point` / `area` is set.
struct Scenario {
    double carrier_hz = 2.4e9;
    double tx_power_dbm = 30.0;
    PlanarPoint tx{};
    double l1_wavelengths = 10.0;
    double l2_wavelengths = 5.0;
    std::optional<PlanarPoint> point;
    std::optional<TargetArea> area;
    ScenarioOptions options;

    double wavelength() const { return kSpeedOfLight / carrier_hz; }
    ReflectorDims dims() const {
        const double lam = wavelength();
        return {l1_wavelengths * lam, l2_wavelengths * lam, lam};
    }
    LinkBudgetConfig link_budget() const { return {dbm_to_watts(tx_power_dbm), dims(), tx}; }
    ScenarioContext context() const {
        return {tx, dims(), point, area, options.search_step_m, options.grid_step_m};
    }
};

namespace detail {

inline double require_positive(double v, const char* field) {
    if (!(v > 0.0)) throw Error(Errc::invalid_parameter, std::string(field) + " must be positive");
    return v;
}

template <class T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::invalid_parameter, std::string("field '") + key + "': " + e.what());
    }
}

inline PlanarPoint parse_point(const nlohmann::json& j, const char* field) {
    if (!j.is_object() || !j.contains("x") || !j.contains("y"))
        throw Error(Errc::invalid_parameter, std::string(field) + " needs numeric x and y");
    return {j.at("x").get<double>(), j.at("y").get<double>()};
}

} // namespace detail

inline Scenario parse_scenario_json(const nlohmann::json& j) {
    Scenario s;
    s.carrier_hz = detail::require_positive(detail::get_or(j, "carrier_hz", 2.4e9), "carrier_hz");
    s.tx_power_dbm = detail::get_or(j, "tx_power_dbm", 30.0);
    if (!j.contains("tx")) throw Error(Errc::invalid_parameter, "scenario is missing 'tx'");
    s.tx = detail::parse_point(j.at("tx"), "tx");

    if (j.contains("reflector")) {
        const auto& refl = j.at("reflector");
        s.l1_wavelengths = detail::require_positive(
            detail::get_or(refl, "l1_wavelengths", 10.0), "reflector.l1_wavelengths");
        s.l2_wavelengths = detail::require_positive(
            detail::get_or(refl, "l2_wavelengths", 5.0), "reflector.l2_wavelengths");
    }

    if (!j.contains("target")) throw Error(Errc::invalid_parameter, "scenario is missing 'target'");
    const auto& target = j.at("target");
    const bool has_point = target.contains("point");
    const bool has_area = target.contains("area");
    if (has_point == has_area)
        throw Error(Errc::invalid_parameter, "target must hold exactly one of 'point' or 'area'");
    if (has_point) {
        s.point = detail::parse_point(target.at("point"), "target.point");
    } else {
        const auto& a = target.at("area");
        TargetArea area;
        area.center = {detail::get_or(a, "cx", 0.0), detail::get_or(a, "cy", 0.0)};
        area.dx = detail::require_positive(detail::get_or(a, "dx", 0.0), "target.area.dx");
        area.dy = detail::require_positive(detail::get_or(a, "dy", 0.0), "target.area.dy");
        s.area = area;
    }

    if (j.contains("options")) {
        const auto& o = j.at("options");
        s.options.grid_step_m = detail::require_positive(
            detail::get_or(o, "grid_step_m", s.options.grid_step_m), "options.grid_step_m");
        s.options.search_step_m = detail::require_positive(
            detail::get_or(o, "search_step_m", s.options.search_step_m), "options.search_step_m");
        s.options.max_reflectors = detail::get_or(o, "max_reflectors", s.options.max_reflectors);
        if (s.options.max_reflectors < 1)
            throw Error(Errc::invalid_parameter, "options.max_reflectors must be at least 1");
        s.options.region_size_m = detail::require_positive(
            detail::get_or(o, "region_size_m", s.options.region_size_m), "options.region_size_m");
    }
    return s;
}

/// Read and validate a scenario file (JSON). Parse errors carry the
/// byte/line context reported by the JSON parser.
inline Scenario parse_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::invalid_parameter, "cannot open scenario file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(Errc::invalid_parameter, std::string("scenario parse error: ") + e.what());
    }
    return parse_scenario_json(j);
}

/// Raw file bytes, for content hashing in output metadata.
inline std::string slurp_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::invalid_parameter, "cannot open file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace frplan
