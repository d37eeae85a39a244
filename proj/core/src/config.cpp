#include "epenc/config.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

namespace epenc {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& where)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw InputError(where + ": not a number: '" + text + "'");
    }
    if (used != text.size()) throw InputError(where + ": trailing characters in '" + text + "'");
    return v;
}

}  // namespace

PulseParams ParameterSet::pulse() const
{
    PulseParams p;
    p.eps0_max = eps0_max.value_or(0.0);
    p.alpha = alpha.value_or(0.0);
    p.t_span = t_span.value_or(6.0);
    if (phi) {
        p = PulseParams::with_area(system, p.eps0_max, p.alpha, *phi, p.t_span);
        if (tau && std::abs(*tau - p.tau) > 1e-12 * p.tau)
            throw InputError("tau and phi are both given and inconsistent");
    } else if (tau) {
        p.tau = *tau;
    }
    p.validate();
    return p;
}

ParameterSet parse_config(std::istream& in, const std::string& source_name)
{
    ParameterSet ps;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        const std::string where = source_name + ":" + std::to_string(lineno);
        if (eq == std::string::npos) throw InputError(where + ": expected key=value");
        const std::string key = trim(t.substr(0, eq));
        const double v = parse_number(trim(t.substr(eq + 1)), where);
        if (key == "mu_re") ps.system.mu.real(v);
        else if (key == "mu_im") ps.system.mu.imag(v);
        else if (key == "gamma") ps.system.gamma = v;
        else if (key == "omega_r") ps.system.omega_r = v;
        else if (key == "eps0_max") ps.eps0_max = v;
        else if (key == "tau") ps.tau = v;
        else if (key == "alpha") ps.alpha = v;
        else if (key == "t_span") ps.t_span = v;
        else if (key == "phi") ps.phi = v;
        else throw InputError(where + ": unknown key '" + key + "'");
    }
    ps.system.validate();
    return ps;
}

ParameterSet load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file '" + path + "'");
    return parse_config(in, path);
}

}  // namespace epenc
