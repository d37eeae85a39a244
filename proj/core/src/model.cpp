#include "epenc/model.hpp"

#include <cmath>
#include <sstream>

namespace epenc {

namespace {

// Root of f with Im >= 0 (non-negative real part on the real axis), so that
// an uncoupled state with Im(Delta) > 0 gives eps_plus = Delta.
cplx upper_sqrt(cplx f)
{
    cplx w = std::sqrt(f);
    if (w.imag() < 0.0 || (w.imag() == 0.0 && w.real() < 0.0)) w = -w;
    return w;
}

}  // namespace

void SystemParams::validate() const
{
    if (!(gamma >= 0.0)) throw InputError("resonance width gamma must be >= 0");
    if (mu.real() == 0.0) throw InputError("Re(mu) must be nonzero: EP at infinite field");
    if (!std::isfinite(omega_r) || !std::isfinite(mu.real()) || !std::isfinite(mu.imag()))
        throw InputError("system parameters must be finite");
}

void PulseParams::validate() const
{
    if (!(eps0_max >= 0.0) || !std::isfinite(eps0_max)) throw InputError("eps0_max must be finite and >= 0");
    if (!(tau > 0.0) || !std::isfinite(tau)) throw InputError("tau must be finite and > 0");
    if (!std::isfinite(alpha)) throw InputError("alpha must be finite");
    if (!(t_span >= 4.0)) throw InputError("t_span must be >= 4");
}

double PulseParams::area(const SystemParams& sys) const
{
    return eps0_max * tau * std::abs(sys.mu.real()) * kSqrt2Pi;
}

PulseParams PulseParams::with_area(const SystemParams& sys, double eps0_max, double alpha, double phi,
                                   double t_span)
{
    if (!(eps0_max > 0.0)) throw InputError("fixed-area pulse needs eps0_max > 0");
    if (!(phi > 0.0)) throw InputError("pulse area phi must be > 0");
    PulseParams p;
    p.eps0_max = eps0_max;
    p.alpha = alpha;
    p.t_span = t_span;
    p.tau = phi / (eps0_max * std::abs(sys.mu.real()) * kSqrt2Pi);
    return p;
}

ComplexFrequencyPair pulse_at(const SystemParams& sys, const PulseParams& p, cplx t)
{
    const cplx x = t / p.tau;
    const cplx delta = 0.5 * p.alpha * x * (p.eps0_max * sys.mu.real()) + cplx(0.0, 0.5 * sys.gamma);
    const cplx omega = sys.mu * p.eps0_max * std::exp(-0.5 * x * x);
    return {delta, omega};
}

double field_envelope(const PulseParams& p, double t)
{
    const double x = t / p.tau;
    return p.eps0_max * std::exp(-0.5 * x * x);
}

double instantaneous_frequency(const SystemParams& sys, const PulseParams& p, double t)
{
    return sys.omega_r + 0.5 * p.alpha * (t / p.tau) * p.eps0_max * sys.mu.real();
}

Eigen::Matrix2cd hamiltonian(const SystemParams& sys, const PulseParams& p, cplx t)
{
    const auto fp = pulse_at(sys, p, t);
    Eigen::Matrix2cd h;
    h << cplx(0.0, 0.0), 0.5 * fp.omega_rabi,
         0.5 * fp.omega_rabi, fp.delta;
    return h;
}

AdiabaticSplit adiabatic_split(const ComplexFrequencyPair& fp, double tol_ep)
{
    const cplx d = fp.delta;
    const cplx o = fp.omega_rabi;
    const cplx iom = cplx(0.0, 1.0) * o;
    const cplx f = (d + iom) * (d - iom);
    const cplx w = upper_sqrt(f);
    AdiabaticSplit s;
    s.eps_minus = 0.5 * (d - w);
    s.eps_plus = 0.5 * (d + w);
    s.split = -w;
    const double scale = std::max(std::norm(d), std::norm(o));
    s.near_ep = scale > 0.0 && std::abs(f) < tol_ep * scale;
    return s;
}

AdiabaticSplit adiabatic_split(const SystemParams& sys, const PulseParams& p, cplx t, double tol_ep)
{
    return adiabatic_split(pulse_at(sys, p, t), tol_ep);
}

CwExceptionalPoint cw_exceptional_point(const SystemParams& sys)
{
    if (sys.mu.real() == 0.0) throw InputError("Re(mu) = 0: EP at infinite field");
    const double ratio = sys.mu.imag() / sys.mu.real();
    const double detuning = -0.5 * sys.gamma * ratio;
    return {sys.omega_r + detuning, sys.gamma / (2.0 * std::abs(sys.mu.real())), detuning};
}

CwEigensystem cw_eigensystem(const SystemParams& sys, double d_omega, double d_eps)
{
    const auto ep = cw_exceptional_point(sys);
    const double s = sys.mu.real() > 0.0 ? 1.0 : -1.0;
    const cplx i_sigma(0.0, -s);
    const cplx omega = sys.mu * (ep.eps0_ep + d_eps);
    // Delta + i*sigma*Omega vanishes identically at the EP; only the offsets survive.
    const cplx zero_factor = d_omega + i_sigma * sys.mu * d_eps;
    const cplx delta = zero_factor - i_sigma * omega;
    const cplx other_factor = zero_factor - 2.0 * i_sigma * omega;
    const cplx w = upper_sqrt(zero_factor * other_factor);

    CwEigensystem e;
    e.lambda_minus = 0.5 * (delta - w);
    e.lambda_plus = 0.5 * (delta + w);
    e.vec_minus << 0.5 * omega, e.lambda_minus;
    e.vec_plus << 0.5 * omega, e.lambda_plus;
    return e;
}

SystemParams helium_preset()
{
    SystemParams sys;
    sys.mu = cplx(-0.192572, 0.000347);
    sys.gamma = 0.000215;
    sys.omega_r = -0.621581 - (-2.123823);
    return sys;
}

SystemParams with_real_dipole(SystemParams sys)
{
    sys.mu = cplx(sys.mu.real(), 0.0);
    return sys;
}

ContourShape ContourShape::from(const SystemParams& sys, const PulseParams& p)
{
    if (!(p.eps0_max > 0.0)) throw InputError("contour shape needs eps0_max > 0");
    const double re_mu = std::abs(sys.mu.real());
    ContourShape c;
    c.alpha = p.alpha;
    c.chirp_sign = sys.mu.real() > 0.0 ? 1.0 : -1.0;
    c.gamma_ratio = sys.gamma / (2.0 * p.eps0_max * re_mu);
    c.dipole_ratio = sys.mu / re_mu;
    return c;
}

ContourShape ContourShape::from_ratio(const SystemParams& sys, double eps_ratio, double alpha)
{
    if (!(sys.gamma > 0.0)) throw InputError("eps0_max / eps0_EP is undefined for gamma = 0");
    if (!(eps_ratio > 0.0)) throw InputError("eps ratio must be > 0");
    ContourShape c;
    c.alpha = alpha;
    c.chirp_sign = sys.mu.real() > 0.0 ? 1.0 : -1.0;
    c.gamma_ratio = 1.0 / eps_ratio;
    c.dipole_ratio = sys.mu / std::abs(sys.mu.real());
    return c;
}

cplx ContourShape::discriminant(cplx x) const
{
    const cplx d = delta(x);
    const cplx io = cplx(0.0, 1.0) * rabi(x);
    return (d + io) * (d - io);
}

cplx ContourShape::discriminant_prime(cplx x) const
{
    const cplx o = rabi(x);
    return 2.0 * delta(x) * delta_prime() - 2.0 * x * o * o;
}

cplx ContourShape::discriminant_second(cplx x) const
{
    const cplx o2 = rabi(x) * rabi(x);
    const cplx dp = delta_prime();
    return 2.0 * dp * dp - 2.0 * o2 + 4.0 * x * x * o2;
}

cplx ContourShape::coupling(cplx x) const
{
    return rabi(x) * (x * delta(x) + delta_prime()) / (2.0 * discriminant(x));
}

}  // namespace epenc
