// Independent numerical oracles used by the tests: adaptive quadrature over
// analytic integrands and finite differences. Nothing here goes through the
// grid code paths it is used to check.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

namespace oracle {

// Composite Simpson quadrature of a complex integrand.
inline std::complex<double> simpson(const std::function<std::complex<double>(double)>& f,
                                    double lo, double hi, int segments = 4096) {
    if (segments % 2) ++segments;
    const double h = (hi - lo) / segments;
    std::complex<double> acc = f(lo) + f(hi);
    for (int i = 1; i < segments; ++i) acc += ((i % 2) ? 4.0 : 2.0) * f(lo + i * h);
    return acc * (h / 3.0);
}

// Analytic pointwise value of g_{a,sigma}(z) e^{i p z}.
inline std::complex<double> gaussian_value(double z, double a, double sigma, double p) {
    const double env = std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.25) *
                       std::exp(-(z - a) * (z - a) / (4.0 * sigma * sigma));
    return std::polar(env, p * z);
}

// <g1, g2> by direct quadrature of the analytic integrand.
inline std::complex<double> gaussian_overlap_quadrature(double a1, double s1, double p1,
                                                        double a2, double s2, double p2) {
    const double lo = std::min(a1 - 12.0 * s1, a2 - 12.0 * s2);
    const double hi = std::max(a1 + 12.0 * s1, a2 + 12.0 * s2);
    return simpson(
        [&](double z) {
            return std::conj(gaussian_value(z, a1, s1, p1)) * gaussian_value(z, a2, s2, p2);
        },
        lo, hi, 1 << 15);
}

// Heat kernel of the free diffusion equation.
inline double heat_kernel(double x, double c, double diffusion, double t) {
    const double var = 2.0 * diffusion * t;
    return std::exp(-(x - c) * (x - c) / (2.0 * var)) / std::sqrt(2.0 * std::numbers::pi * var);
}

} // namespace oracle
