#pragma once

// Two-state rotating-wave model of a bound state coupled to an autoionizing
// resonance by a linearly chirped Gaussian pulse. Atomic units, hbar = 1.

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace epenc {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt2Pi = 2.50662827463100050242;

/// Bad user input: invalid parameters, malformed config, unknown keys.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical procedure failed to deliver a result within tolerance.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Field-free two-level system: resonance frequency, resonance width and
/// complex transition dipole.
struct SystemParams {
    double omega_r = 0.0;
    double gamma = 0.0;
    cplx mu{0.0, 0.0};

    /// Throws InputError when gamma < 0 or Re(mu) == 0.
    void validate() const;
};

/// One Gaussian linearly chirped pulse, i.e. one contour in the
/// (frequency, strength) plane. t_span is the half width of the
/// integration window in units of tau.
struct PulseParams {
    double eps0_max = 0.0;
    double tau = 1.0;
    double alpha = 0.0;
    double t_span = 6.0;

    void validate() const;

    /// Temporal pulse area eps0_max * tau * |Re mu| * sqrt(2 pi).
    [[nodiscard]] double area(const SystemParams& sys) const;

    /// Builds a pulse with the duration chosen so that the area equals phi.
    /// Requires eps0_max > 0 and phi > 0.
    static PulseParams with_area(const SystemParams& sys, double eps0_max, double alpha, double phi,
                                 double t_span = 6.0);
};

/// Diabatic amplitudes in the rotating frame.
struct StateVector {
    cplx c_bound{1.0, 0.0};
    cplx c_res{0.0, 0.0};
    double t = 0.0;

    [[nodiscard]] double norm() const { return std::norm(c_bound) + std::norm(c_res); }
};

/// Detuning Delta(t) and Rabi frequency Omega(t), analytic in t.
struct ComplexFrequencyPair {
    cplx delta;
    cplx omega_rabi;
};

struct AdiabaticSplit {
    cplx eps_minus;
    cplx eps_plus;
    cplx split;  // eps_minus - eps_plus
    bool near_ep = false;
};

struct CwExceptionalPoint {
    double omega_ep;
    double eps0_ep;
    double detuning_ep;  // omega_ep - omega_r, without the rounding of omega_ep
};

struct CwEigensystem {
    cplx lambda_minus;
    cplx lambda_plus;
    Eigen::Vector2cd vec_minus;  // not normalized
    Eigen::Vector2cd vec_plus;
};

inline constexpr double kDefaultTolEp = 1e-12;

[[nodiscard]] ComplexFrequencyPair pulse_at(const SystemParams& sys, const PulseParams& p, cplx t);

/// Envelope eps0(t) and instantaneous frequency omega(t) for real t.
[[nodiscard]] double field_envelope(const PulseParams& p, double t);
[[nodiscard]] double instantaneous_frequency(const SystemParams& sys, const PulseParams& p, double t);

/// hbar * [[0, Omega/2], [Omega/2, Delta]]; complex symmetric, not Hermitian.
[[nodiscard]] Eigen::Matrix2cd hamiltonian(const SystemParams& sys, const PulseParams& p, cplx t);

/// Principal-branch adiabatic energies. near_ep is set when
/// |Delta^2 + Omega^2| < tol_ep * max(|Delta|^2, |Omega|^2).
[[nodiscard]] AdiabaticSplit adiabatic_split(const SystemParams& sys, const PulseParams& p, cplx t,
                                             double tol_ep = kDefaultTolEp);
[[nodiscard]] AdiabaticSplit adiabatic_split(const ComplexFrequencyPair& fp, double tol_ep = kDefaultTolEp);

[[nodiscard]] CwExceptionalPoint cw_exceptional_point(const SystemParams& sys);

/// Eigensystem of the constant-field (cw) Hamiltonian at frequency
/// omega_ep + d_omega and strength eps0_ep + d_eps. Parametrizing relative to
/// the EP keeps the vanishing factor of the discriminant exact at the EP.
[[nodiscard]] CwEigensystem cw_eigensystem(const SystemParams& sys, double d_omega, double d_eps);

/// He* 1P(1s2p) -> He** 2 1S(2p^2) transition.
[[nodiscard]] SystemParams helium_preset();

/// Same system with Im(mu) set to zero (exactly time-symmetric contours).
[[nodiscard]] SystemParams with_real_dipole(SystemParams sys);

/// Pulse contour in nondimensional form. With x = t/tau and the scale
/// Omega_s = eps0_max |Re mu|:
///   delta(x) = Delta/Omega_s = chirp_sign * alpha * x / 2 + i * gamma_ratio
///   rabi(x)  = Omega/Omega_s = dipole_ratio * exp(-x^2/2)
/// gamma_ratio = Gamma / (2 Omega_s) = eps0_EP / eps0_max.
struct ContourShape {
    double alpha = 0.0;
    double chirp_sign = -1.0;
    double gamma_ratio = 1.0;
    cplx dipole_ratio{-1.0, 0.0};

    static ContourShape from(const SystemParams& sys, const PulseParams& p);
    /// Shape for eps0_max = eps_ratio * eps0_EP.
    static ContourShape from_ratio(const SystemParams& sys, double eps_ratio, double alpha);

    [[nodiscard]] cplx delta(cplx x) const { return chirp_sign * alpha * 0.5 * x + cplx(0.0, gamma_ratio); }
    [[nodiscard]] cplx delta_prime() const { return chirp_sign * alpha * 0.5; }
    [[nodiscard]] cplx rabi(cplx x) const { return dipole_ratio * std::exp(-0.5 * x * x); }
    /// f(x) = delta^2 + rabi^2; its zeros are the dynamical EPs.
    [[nodiscard]] cplx discriminant(cplx x) const;
    [[nodiscard]] cplx discriminant_prime(cplx x) const;
    [[nodiscard]] cplx discriminant_second(cplx x) const;
    /// Nondimensional non-adiabatic coupling, N dt = coupling(x) dx.
    [[nodiscard]] cplx coupling(cplx x) const;
    /// True when Im(mu) = 0, so that f(-conj(x)) = conj(f(x)).
    [[nodiscard]] bool time_symmetric() const { return dipole_ratio.imag() == 0.0; }
};

/// Chooses the root of f nearest to the reference, i.e. continues the
/// square-root branch from a neighbouring point.
[[nodiscard]] inline cplx continue_sqrt(cplx f, cplx reference)
{
    const cplx w = std::sqrt(f);
    return std::norm(w - reference) <= std::norm(w + reference) ? w : -w;
}

}  // namespace epenc
