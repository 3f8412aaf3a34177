#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "clab/hilbert.hpp"

namespace clab::semiclassics {

struct ParticleParams {
    double mass = 1.0;
    double hbar = 1.0;
    hilbert::GaussianParams packet;
    std::vector<double> potential; // V(z) sampled on the grid; empty = free
};

// Squared Fubini-Study speed of the state split into the classical,
// acceleration, and spreading contributions, with the grid value computed
// independently from d(psi)/dt = -(i/hbar) H psi.
struct Decomposition {
    double classical_term = 0.0;    // v^2 / 4 sigma^2
    double acceleration_term = 0.0; // m^2 w^2 sigma^2 / hbar^2
    double spreading_term = 0.0;    // hbar^2 / 32 sigma^4 m^2
    double numeric_total = 0.0;
    double analytic_sum() const { return classical_term + acceleration_term + spreading_term; }
};

Decomposition velocity_decomposition(const ParticleParams& params, const hilbert::Grid& grid);

// Free evolution of a Gaussian packet: center a + (p/m) t, width
// sqrt(sigma^2 + (hbar t / 2 m sigma)^2).
hilbert::GaussianParams free_spread(const hilbert::GaussianParams& packet, double mass,
                                    double hbar, double t);

// Screen density for the spread packets: incoherent (a which-way detector was
// present) or coherent (no detector); both normalized on the grid.
std::vector<double> screen_pattern(std::complex<double> alpha, std::complex<double> beta,
                                   const hilbert::GaussianParams& spread_a,
                                   const hilbert::GaussianParams& spread_b,
                                   bool detector_present, const hilbert::Grid& grid,
                                   double hbar = 1.0);

// (P_max - P_min) / (P_max + P_min) over [z_lo, z_hi].
double fringe_visibility(const std::vector<double>& density, const hilbert::Grid& grid,
                         double z_lo, double z_hi);

struct SpherePoint {
    double x = 0.0, y = 0.0, z = 0.0;
};

// Bundle projection of the two-state (alpha, beta).
SpherePoint to_sphere(std::complex<double> alpha, std::complex<double> beta);

// Cylindrical (mu_z, theta) trajectory lifted onto the unit sphere with
// delta_z^2 = 1 - mu_z^2 (slits rescaled to a = -1, b = 1).
std::vector<SpherePoint> sphere_walk_view(const std::vector<std::pair<double, double>>& traj);

} // namespace clab::semiclassics
