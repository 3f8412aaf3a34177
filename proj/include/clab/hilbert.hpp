#pragma once

#include <complex>
#include <vector>

#include "clab/grid.hpp"

namespace clab::hilbert {

using cplx = std::complex<double>;

// Complex amplitudes on a uniform grid. States produced by the constructors
// below are unit-normalized under the trapezoid inner product.
struct Wavefunction {
    Grid grid;
    std::vector<cplx> amp;

    Wavefunction() = default;
    explicit Wavefunction(const Grid& g) : grid(g), amp(g.n_points, cplx(0.0, 0.0)) {}
};

// Parameters of g_{a,sigma}(z) e^{i p z / hbar}: center a, width sigma
// (|g|^2 is the normal density with mean a and variance sigma^2), momentum p.
struct GaussianParams {
    double center = 0.0;
    double width = 1.0;
    double momentum = 0.0;
};

struct Moments {
    double mu_z = 0.0;
    double delta_z = 0.0;
};

// log |<.,.>| and the phase of the overlap, so that extreme separations never
// underflow.
struct OverlapLog {
    double log_magnitude = 0.0;
    double phase = 0.0;
};

double norm(const Wavefunction& psi);
void normalize(Wavefunction& psi);

Wavefunction make_gaussian(const GaussianParams& p, const Grid& grid, double hbar = 1.0);

// Normalized superposition ca*a + cb*b (+ cc*c).
Wavefunction superpose(cplx ca, const Wavefunction& a, cplx cb, const Wavefunction& b);
Wavefunction superpose(cplx ca, const Wavefunction& a, cplx cb, const Wavefunction& b,
                       cplx cc, const Wavefunction& c);

cplx inner_product(const Wavefunction& psi, const Wavefunction& phi);

// arccos |<psi, phi>| in [0, pi/2]; both states must be normalized.
double fubini_study_distance(const Wavefunction& psi, const Wavefunction& phi);

// Closed-form overlap of two Gaussian packets, evaluated in log space.
OverlapLog gaussian_overlap_analytic(const GaussianParams& p1, const GaussianParams& p2,
                                     double hbar = 1.0);

Moments moments(const Wavefunction& psi);

// psi(z) = sqrt(lambda) * phi(lambda (z - mu_z - tau) + mu_z), cubic
// interpolation, renormalized. mu_z -> mu_z + tau, delta_z -> delta_z / lambda.
Wavefunction squeeze_translate(const Wavefunction& phi, double tau, double lambda);

// d(phi)/dz: spectral when n_points is a power of two, else 4th-order central.
Wavefunction derivative(const Wavefunction& phi);

// Tangent to the translation path at phi: -d(phi)/dz.
Wavefunction tangent_tau(const Wavefunction& phi);

// Tangent to the squeezing path at phi: phi/2 + (z - mu_z) d(phi)/dz.
Wavefunction tangent_s(const Wavefunction& phi);

// Re<tangent_s, tangent_tau> normalized by the tangent norms; near zero for
// superpositions of well-separated equal-width Gaussians.
double step_orthogonality(const Wavefunction& phi);

// A point (tau, s) of the translate/squeeze manifold built over a reference
// state; s = ln lambda.
struct ManifoldState {
    Wavefunction reference;
    double tau = 0.0;
    double s = 0.0;

    Wavefunction realize() const;
    Moments predicted_moments() const; // (mu_ref + tau, delta_ref * e^{-s})
};

} // namespace clab::hilbert
