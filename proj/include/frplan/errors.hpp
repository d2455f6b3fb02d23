#pragma once

#include <stdexcept>
#include <string>

namespace frplan {

/// Machine-readable failure categories. The CLI prints the code name verbatim,
/// so these double as the tool's exit diagnostics.
enum class Errc {
    coincident_points,
    degenerate_geometry,
    no_solution,
    spacing_infeasible,
    non_convergence,
    empty_search_region,
    invalid_parameter,
    grazing_angle,
    nonpositive_power,
    unhandled_geometry,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::coincident_points:   return "coincident_points";
        case Errc::degenerate_geometry: return "degenerate_geometry";
        case Errc::no_solution:         return "no_solution";
        case Errc::spacing_infeasible:  return "spacing_infeasible";
        case Errc::non_convergence:     return "non_convergence";
        case Errc::empty_search_region: return "empty_search_region";
        case Errc::invalid_parameter:   return "invalid_parameter";
        case Errc::grazing_angle:       return "grazing_angle";
        case Errc::nonpositive_power:   return "nonpositive_power";
        case Errc::unhandled_geometry:  return "unhandled_geometry";
    }
    return "unknown";
}

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }
    const char* code_name() const noexcept { return errc_name(code_); }

  private:
    Errc code_;
};

} // namespace frplan
