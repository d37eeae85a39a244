#pragma once

// Plain-text key=value parameter files. Recognized keys:
//   mu_re mu_im gamma omega_r eps0_max tau alpha t_span phi
// Blank lines and lines starting with '#' are ignored. Unknown keys are errors.
// System keys not given fall back to the helium preset.

#include <iosfwd>
#include <optional>
#include <string>

#include "epenc/model.hpp"

namespace epenc {

struct ParameterSet {
    SystemParams system = helium_preset();
    std::optional<double> eps0_max;
    std::optional<double> tau;
    std::optional<double> alpha;
    std::optional<double> t_span;
    std::optional<double> phi;

    /// Resolves the pulse. If phi is given it fixes tau; giving both tau and phi
    /// is accepted only when they agree to 1e-12 relative.
    [[nodiscard]] PulseParams pulse() const;
};

[[nodiscard]] ParameterSet parse_config(std::istream& in, const std::string& source_name = "<stream>");
[[nodiscard]] ParameterSet load_config(const std::string& path);

}  // namespace epenc
