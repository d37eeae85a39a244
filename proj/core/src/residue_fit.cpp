#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "epenc/complextime.hpp"

namespace epenc {

cplx residue_model(std::span<const cplx> sigma, std::span<const cplx> a, double phi)
{
    if (sigma.size() != a.size()) throw InputError("residue model needs one weight per exponent");
    cplx s{0.0, 0.0};
    for (std::size_t k = 0; k < sigma.size(); ++k) s -= a[k] * std::exp(-phi * sigma[k] / kSqrt2Pi);
    return s;
}

ResidueFitReport residue_model_fit_samples(std::span<const cplx> sigma, std::span<const double> phi,
                                           std::span<const cplx> samples, double condition_limit)
{
    const int K = int(sigma.size());
    const int n = int(phi.size());
    if (K < 1) throw InputError("residue fit needs at least one exponent");
    if (n != int(samples.size())) throw InputError("phi and amplitude sample counts differ");
    if (n < 4 * K) throw InputError("residue fit needs at least 4K pulse-area samples");

    Eigen::MatrixXcd A(n, K);
    Eigen::VectorXcd y(n);
    for (int i = 0; i < n; ++i) {
        const double wgt = std::abs(samples[i]) > 0.0 ? 1.0 / std::abs(samples[i]) : 1.0;
        for (int k = 0; k < K; ++k) A(i, k) = -std::exp(-phi[i] * sigma[k] / kSqrt2Pi) * wgt;
        y(i) = samples[i] * wgt;
    }
    Eigen::VectorXd colnorm = A.colwise().norm();
    for (int k = 0; k < K; ++k) {
        if (!(colnorm(k) > 0.0) || !std::isfinite(colnorm(k)))
            throw NumericalError("residue fit column underflow or overflow");
        A.col(k) /= colnorm(k);
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
    if (!(cond < condition_limit))
        throw NumericalError("near coalescence; model degenerate (condition number " + std::to_string(cond) + ")");
    Eigen::VectorXcd coef = svd.solve(y);
    for (int k = 0; k < K; ++k) coef(k) /= colnorm(k);

    ResidueFitReport rep;
    rep.sigma.assign(sigma.begin(), sigma.end());
    rep.a.resize(K);
    for (int k = 0; k < K; ++k) rep.a[k] = coef(k);
    rep.phi.assign(phi.begin(), phi.end());
    rep.a_plus.assign(samples.begin(), samples.end());
    rep.condition = cond;

    // Uncentred R^2 on the weighted rows: 1 - |r|^2 / |y|^2.
    double ss_res = 0.0, ss_tot = 0.0;
    for (int i = 0; i < n; ++i) {
        const double wgt = std::abs(samples[i]) > 0.0 ? 1.0 / std::abs(samples[i]) : 1.0;
        const cplx model = residue_model(sigma, rep.a, phi[i]) * wgt;
        ss_res += std::norm(y(i) - model);
        ss_tot += std::norm(y(i));
    }
    rep.residual_norm = std::sqrt(ss_res / n);
    rep.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;

    const double inf = std::numeric_limits<double>::infinity();
    const double im1 = std::abs(sigma[0].imag());
    rep.amplitude_period = im1 > 0.0 ? 2.0 * kPi * kSqrt2Pi / im1 : inf;
    if (K >= 2) {
        const double d = std::abs((sigma[0] - sigma[1]).imag());
        rep.node_spacing = d > 0.0 ? 2.0 * kPi * kSqrt2Pi / d : inf;
    } else {
        rep.node_spacing = inf;
    }
    rep.log_slope = -sigma[0].real() / kSqrt2Pi;
    return rep;
}

ResidueFitReport residue_model_fit(const ContourShape& shape, std::span<const cplx> sigma,
                                   std::span<const double> phi, const ResidueFitOptions& opts)
{
    if (int(sigma.size()) != opts.K) throw InputError("number of exponents differs from K");
    std::vector<cplx> samples;
    samples.reserve(phi.size());
    for (double ph : phi) {
        if (!(ph > 0.0)) throw InputError("pulse areas must be positive");
        samples.push_back(a_plus_first_order(shape, ph / kSqrt2Pi, opts.x_span, opts.pert).a_plus);
    }
    return residue_model_fit_samples(sigma, phi, samples, opts.condition_limit);
}

}  // namespace epenc
