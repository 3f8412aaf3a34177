#include "clab/semiclassics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "clab/errors.hpp"
#include "clab/spectral.hpp"

namespace clab::semiclassics {

namespace {

using hilbert::cplx;
using hilbert::Grid;
using hilbert::Wavefunction;

// d/dz of the sampled potential at position z0 (4th-order central).
double potential_slope(const std::vector<double>& v, const Grid& g, double z0) {
    const int k = std::clamp(static_cast<int>(std::lround((z0 - g.z_min) / g.dz())), 2,
                             g.n_points - 3);
    return (-v[k + 2] + 8.0 * v[k + 1] - 8.0 * v[k - 1] + v[k - 2]) / (12.0 * g.dz());
}

} // namespace

Decomposition velocity_decomposition(const ParticleParams& params, const Grid& grid) {
    if (params.mass <= 0.0 || params.hbar <= 0.0)
        throw ConfigError("velocity_decomposition: mass and hbar must be positive");
    if (!params.potential.empty() &&
        static_cast<int>(params.potential.size()) != grid.n_points)
        throw ConfigError("velocity_decomposition: potential not sampled on this grid");
    const auto& pk = params.packet;
    if (pk.center - 8.0 * pk.width < grid.z_min || pk.center + 8.0 * pk.width > grid.z_max)
        throw SupportClippedError("packet closer than 8 sigma to the domain ends");

    const double v = pk.momentum / params.mass;
    const double w = params.potential.empty()
                         ? 0.0
                         : -potential_slope(params.potential, grid, pk.center) / params.mass;
    const double s2 = pk.width * pk.width;

    Decomposition d;
    d.classical_term = v * v / (4.0 * s2);
    d.acceleration_term = params.mass * params.mass * w * w * s2 / (params.hbar * params.hbar);
    d.spreading_term = params.hbar * params.hbar /
                       (32.0 * s2 * s2 * params.mass * params.mass);

    // Projective-space speed of d(psi)/dt = -(i/hbar)(-hbar^2/2m psi'' + V psi):
    // |H psi|^2 - |<psi, H psi>|^2 over hbar^2, gauge term removed.
    const Wavefunction psi = hilbert::make_gaussian(pk, grid, params.hbar);
    const Wavefunction d2 = spectral::second_derivative(psi);
    Wavefunction hpsi(grid);
    const double kin = -params.hbar * params.hbar / (2.0 * params.mass);
    for (int k = 0; k < grid.n_points; ++k) {
        hpsi.amp[k] = kin * d2.amp[k];
        if (!params.potential.empty()) hpsi.amp[k] += params.potential[k] * psi.amp[k];
    }
    const double h2 = std::pow(hilbert::norm(hpsi), 2);
    const double h1 = std::norm(hilbert::inner_product(psi, hpsi));
    d.numeric_total = (h2 - h1) / (params.hbar * params.hbar);

    if (std::abs(d.numeric_total - d.analytic_sum()) > 0.05 * std::abs(d.numeric_total))
        throw GridTooCoarseError("grid value and closed form disagree by more than 5%");
    return d;
}

hilbert::GaussianParams free_spread(const hilbert::GaussianParams& packet, double mass,
                                    double hbar, double t) {
    if (t < 0.0) throw ConfigError("free_spread: t must be >= 0");
    hilbert::GaussianParams out = packet;
    out.center = packet.center + packet.momentum / mass * t;
    const double squeeze = hbar * t / (2.0 * mass * packet.width);
    out.width = std::sqrt(packet.width * packet.width + squeeze * squeeze);
    return out;
}

std::vector<double> screen_pattern(cplx alpha, cplx beta,
                                   const hilbert::GaussianParams& spread_a,
                                   const hilbert::GaussianParams& spread_b,
                                   bool detector_present, const Grid& grid, double hbar) {
    if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-9)
        throw ConfigError("screen_pattern: |alpha|^2 + |beta|^2 must equal 1");
    const Wavefunction ga = hilbert::make_gaussian(spread_a, grid, hbar);
    const Wavefunction gb = hilbert::make_gaussian(spread_b, grid, hbar);
    std::vector<double> density(static_cast<std::size_t>(grid.n_points), 0.0);
    if (detector_present) {
        // Which-way record: incoherent mixture, no cross term.
        for (int k = 0; k < grid.n_points; ++k)
            density[k] = std::norm(alpha) * std::norm(ga.amp[k]) +
                         std::norm(beta) * std::norm(gb.amp[k]);
    } else {
        const Wavefunction sum = hilbert::superpose(alpha, ga, beta, gb);
        for (int k = 0; k < grid.n_points; ++k) density[k] = std::norm(sum.amp[k]);
    }
    // Normalize on the grid (trapezoid).
    double mass = 0.0;
    for (int k = 0; k < grid.n_points; ++k) {
        const double wgt = (k == 0 || k == grid.n_points - 1) ? 0.5 : 1.0;
        mass += density[k] * wgt * grid.dz();
    }
    for (double& p : density) p /= mass;
    return density;
}

double fringe_visibility(const std::vector<double>& density, const Grid& grid, double z_lo,
                         double z_hi) {
    double pmax = 0.0, pmin = std::numeric_limits<double>::max();
    for (int k = 0; k < grid.n_points; ++k) {
        const double z = grid.node(k);
        if (z < z_lo || z > z_hi) continue;
        pmax = std::max(pmax, density[k]);
        pmin = std::min(pmin, density[k]);
    }
    if (pmax <= 0.0) throw ConfigError("fringe_visibility: empty window");
    return (pmax - pmin) / (pmax + pmin);
}

SpherePoint to_sphere(cplx alpha, cplx beta) {
    if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-9)
        throw ConfigError("to_sphere: state must be normalized");
    const cplx c = alpha * std::conj(beta);
    SpherePoint p;
    p.x = 2.0 * c.real();
    p.y = -2.0 * c.imag(); // i (alpha conj(beta) - conj(alpha) beta)
    p.z = std::norm(beta) - std::norm(alpha);
    return p;
}

std::vector<SpherePoint> sphere_walk_view(const std::vector<std::pair<double, double>>& traj) {
    std::vector<SpherePoint> out;
    out.reserve(traj.size());
    for (const auto& [mu, theta] : traj) {
        if (mu < -1.0 || mu > 1.0)
            throw OutOfIntervalError("sphere_walk_view: mu_z outside [-1, 1]");
        const double rho = std::sqrt(std::max(0.0, 1.0 - mu * mu));
        out.push_back({rho * std::cos(theta), rho * std::sin(theta), mu});
    }
    return out;
}

} // namespace clab::semiclassics
